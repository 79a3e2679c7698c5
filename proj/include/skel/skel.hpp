#pragma once

// Convenience header pulling in the whole library.

#include "skel/error.hpp"
#include "skel/ltl.hpp"
#include "skel/threeval.hpp"
#include "skel/automata.hpp"
#include "skel/oracle.hpp"
#include "skel/minlang.hpp"
#include "skel/membership.hpp"
#include "skel/skeleton.hpp"
#include "skel/learning.hpp"
