// expoknap: solve exponent equations described in a problem file.
//
//   expoknap run FILE [--box N] [--kappa K] [--ball B] [--effort N]
//                     [--format json|text] [--oracle] [--timing]
//   expoknap format FILE
//   expoknap oracle wp FILE GROUP WORD
//   expoknap oracle enumerate FILE EXPR [--box N]
//   expoknap oracle ball FILE SUBGROUP MAXLEN
//
// Exit codes: 0 success, 1 bad input, 2 usage, 3 effort budget exceeded.

#include <CLI11.hpp>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "expoknap/cli.hpp"
#include "expoknap/oracle.hpp"
#include "expoknap/presburger.hpp"

using namespace expoknap;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

cli::ProblemFile load(const std::string& path) {
  try {
    return cli::parse(slurp(path));
  } catch (const cli::ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

oracle::Presentation presentation(const cli::ProblemFile& p, const std::string& group) {
  oracle::Presentation pres;
  pres.alphabet = p.alphabet_of(group);
  for (const auto& h : p.hnns)
    if (h.name == group)
      pres.subgroup_generators[static_cast<std::uint32_t>(pres.alphabet.find(h.stable))] =
          p.find_subgroup(h.subgroup)->generators;
  return pres;
}

}  // namespace

int main(int argc, char** argv) {
  omp_set_num_threads(oracle::thread_count());

  CLI::App app{"Knapsack and exponent equations over free groups and their HNN-extensions"};
  app.require_subcommand(1);

  std::string file;
  cli::Options opts;
  std::string fmt = "json";

  auto* run = app.add_subcommand("run", "answer the queries of a problem file");
  run->add_option("file", file, "problem file")->required();
  run->add_option("--box", opts.box, "enumeration box [0,N]^n")->capture_default_str();
  run->add_option("--kappa", opts.kappa, "cutting-word radius")->capture_default_str();
  run->add_option("--ball", opts.ball, "transducer ball bound (0 = auto)")->capture_default_str();
  run->add_option("--effort", opts.effort, "work budget (0 = unlimited)")->capture_default_str();
  run->add_option("--format", fmt, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  run->add_flag("--oracle", opts.oracle, "cross-check every query against brute force");
  run->add_flag("--timing", opts.timing, "add wall-clock times (output is then not reproducible)");

  auto* fmt_cmd = app.add_subcommand("format", "print a problem file in canonical form");
  fmt_cmd->add_option("file", file, "problem file")->required();

  auto* orc = app.add_subcommand("oracle", "brute-force reference computations");
  orc->require_subcommand(1);
  std::string group, word, name;
  std::uint64_t box = 6;
  std::size_t maxlen = 4;
  auto* wp = orc->add_subcommand("wp", "decide w = 1 by pin rewriting");
  wp->add_option("file", file)->required();
  wp->add_option("group", group)->required();
  wp->add_option("word", word)->required();
  auto* en = orc->add_subcommand("enumerate", "solutions of an expression in a box");
  en->add_option("file", file)->required();
  en->add_option("expr", name)->required();
  en->add_option("--box", box)->capture_default_str();
  auto* ball = orc->add_subcommand("ball", "subgroup elements of bounded length");
  ball->add_option("file", file)->required();
  ball->add_option("subgroup", name)->required();
  ball->add_option("maxlen", maxlen)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      auto p = load(file);
      opts.base_dir = std::filesystem::path(file).parent_path().string();
      if (opts.base_dir.empty()) opts.base_dir = ".";
      auto report = cli::run(p, opts);
      if (fmt == "json")
        std::cout << report.dump(2) << "\n";
      else
        std::cout << cli::render_text(report);
    } else if (*fmt_cmd) {
      std::cout << cli::format(load(file));
    } else if (*wp) {
      auto p = load(file);
      oracle::Oracle o(presentation(p, group));
      Word w = o.presentation().alphabet.parse(word);
      auto r = oracle::wp_bfs(o, w);
      bool one = r ? *r : oracle::wp_rewrite(o, w, 0);
      std::cout << (one ? "trivial" : "nontrivial") << "\n";
    } else if (*en) {
      auto p = load(file);
      const auto* e = p.find_expr(name);
      if (!e) throw std::runtime_error("undeclared expression '" + name + "'");
      oracle::Oracle o(presentation(p, e->group));
      for (const auto& v : e->expr.variables()) std::cout << v << " ";
      std::cout << "\n";
      for (const auto& pt : oracle::brute_solutions_parallel(o, e->expr, box)) {
        for (auto x : pt) std::cout << x << " ";
        std::cout << "\n";
      }
    } else if (*ball) {
      auto p = load(file);
      const auto* s = p.find_subgroup(name);
      if (!s) throw std::runtime_error("undeclared subgroup '" + name + "'");
      Alphabet al = p.alphabet_of(s->group);
      for (const auto& w : oracle::brute_subgroup_ball(s->generators, maxlen)) std::cout << al.format(w) << "\n";
    }
  } catch (const EffortExceeded& e) {
    std::cerr << "effort exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
