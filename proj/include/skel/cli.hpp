#pragma once

// Command-line front end. Exit codes: 0 success, 1 negative verdict
// (no skeleton, failed check), 2 usage or input errors, 3 resource limits.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skel/learning.hpp"
#include "skel/ltl.hpp"
#include "skel/membership.hpp"
#include "skel/oracle.hpp"
#include "skel/skeleton.hpp"

namespace skel::cli {

enum ExitCode { ok = 0, negative = 1, usage = 2, resource = 3 };

namespace detail {

inline std::optional<std::vector<std::string>> name_override(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<std::string> names;
  std::stringstream in(text);
  std::string n;
  while (std::getline(in, n, ',')) {
    n.erase(0, n.find_first_not_of(" \t"));
    n.erase(n.find_last_not_of(" \t") + 1);
    if (!n.empty()) names.push_back(n);
  }
  return names;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skeletons of LTL specifications: synthesis, checking and queries"};
  app.require_subcommand(1);

  std::string spec_path, skeleton_path, text, out_path, dot_path, stats_path, inputs, outputs;
  SynthesisLimits limits;

  auto spec_opts = [&](CLI::App* c) {
    c->add_option("spec", spec_path, "specification file")->required();
    c->add_option("--inputs", inputs, "comma-separated input names, replacing the file's");
    c->add_option("--outputs", outputs, "comma-separated output names, replacing the file's");
  };

  auto* synth = app.add_subcommand("synth", "learn the minimal skeleton");
  spec_opts(synth);
  synth->add_option("--out", out_path, "write the skeleton JSON here instead of standard output");
  synth->add_option("--dot", dot_path, "also write DOT to this file ('-' for standard output)");
  synth->add_option("--stats-json", stats_path, "write learner statistics as JSON to this file");
  synth->add_option("--seed", limits.seed, "letter enumeration order (0 keeps the default order)");
  synth->add_option("--max-states", limits.max_states, "largest conjecture size");
  synth->add_option("--max-queries", limits.max_queries, "membership query budget");
  synth->add_option("--timeout-s", limits.timeout_s, "wall-clock budget in seconds");

  auto* check = app.add_subcommand("check", "model check a skeleton against a specification");
  spec_opts(check);
  check->add_option("skeleton", skeleton_path, "skeleton JSON file")->required();

  auto* member = app.add_subcommand("member", "is a finite word a bad prefix of min(spec)?");
  spec_opts(member);
  member->add_option("word", text, "letters like {r1=1|g1=0,g2=?} separated by spaces")->required();

  auto* mintrace = app.add_subcommand("mintrace", "minimal satisfying open trace for an input lasso");
  spec_opts(mintrace);
  mintrace->add_option("input", text, "input lasso like {r1=1} ({r1=0})^w")->required();

  auto* exp = app.add_subcommand("export", "convert a skeleton JSON file to DOT");
  exp->add_option("skeleton", skeleton_path, "skeleton JSON file")->required();
  exp->add_option("--out", out_path, "DOT file (standard output by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  auto load = [&]() {
    try {
      return load_spec(spec_path, detail::name_override(inputs), detail::name_override(outputs));
    } catch (const Error& e) {
      throw Error(spec_path + ": " + e.what());
    }
  };
  auto load_sk = [&]() {
    try {
      return load_skeleton(skeleton_path);
    } catch (const Error& e) {
      throw Error(skeleton_path + ": " + e.what());
    }
  };

  try {
    if (*synth) {
      Spec sp = load();
      SynthesisResult r = lstar_synthesize(sp.formula, sp.partition, limits);
      if (!stats_path.empty()) {
        auto j = stats_to_json(r.stats);
        j["outcome"] = to_string(r.outcome);
        detail::write_file(stats_path, j.dump(2) + "\n");
      }
      err << "membership queries: " << r.stats.membership_queries
          << ", equivalence queries: " << r.stats.equivalence_queries << "\n";
      switch (r.outcome) {
        case SynthesisOutcome::skeleton: {
          std::string json = to_json(*r.skeleton);
          if (out_path.empty()) out << json;
          else detail::write_file(out_path, json);
          if (dot_path == "-") out << to_dot(*r.skeleton);
          else if (!dot_path.empty()) detail::write_file(dot_path, to_dot(*r.skeleton));
          return ok;
        }
        case SynthesisOutcome::no_skeleton:
          out << "no skeleton: " << to_string(*r.witness, sp.partition) << "\n";
          return negative;
        case SynthesisOutcome::unrealizable_input:
          out << "no skeleton: input " << to_string(*r.unrealizable_input, sp.partition) << " admits no model\n";
          return negative;
        case SynthesisOutcome::resource_limit:
          err << r.message << "\n";
          return resource;
      }
    }
    if (*check) {
      Spec sp = load();
      Skeleton s = load_sk();
      if (!(s.part == sp.partition)) throw PartitionMismatch();
      Verdict v = model_check(s, sp.formula);
      if (v.holds) {
        out << "yes\n";
        return ok;
      }
      const auto& cx = *v.counterexample;
      out << "no\ncounterexample: " << to_string(cx.word, s.part) << "\n";
      try {
        out << "bad prefix: " << to_string(shortest_bad_prefix(sp.formula, sp.partition, cx.word), s.part) << "\n";
      } catch (const NotActuallyBad&) {
        out << "bad prefix: none (every prefix extends into min)\n";
      }
      return negative;
    }
    if (*member) {
      Spec sp = load();
      std::vector<RawLetter> w;
      try {
        w = parse_raw_word(text, sp.partition);
      } catch (const Error& e) {
        throw Error(std::string("word: ") + e.what());
      }
      out << (BadPrefixDecider(sp.formula, sp.partition).verdict(w).is_bad ? "bad" : "not-bad") << "\n";
      return ok;
    }
    if (*mintrace) {
      Spec sp = load();
      InputLasso in;
      try {
        in = parse_input_lasso(text, sp.partition);
      } catch (const Error& e) {
        throw Error(std::string("input: ") + e.what());
      }
      auto m = min_trace(sp.formula, sp.partition, in);
      out << (m ? to_string(*m, sp.partition) : std::string("no-model")) << "\n";
      return ok;
    }
    if (*exp) {
      std::string dot = to_dot(load_sk());
      if (out_path.empty()) out << dot;
      else detail::write_file(out_path, dot);
      return ok;
    }
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << "\n";
    return resource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace skel::cli
