#pragma once

// Command line front end. Exit codes: 0 ok / S-ample, 1 error,
// 2 not S-ample, 3 undecidable.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cma/pipeline/pipeline.hpp"

namespace cma::cli {

namespace detail {

inline EtaleAlgebra load_algebra(const std::string& path) {
  const io::json doc = io::read_json_file(path);
  const io::Cursor c(doc);
  io::check_schema(c);
  return io::algebra_from_json(c.has("algebra") ? c.at("algebra") : c);
}

inline std::vector<std::uint64_t> parse_primes(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  const PlaceSet s = PlaceSet::parse(text);
  if (s.include_infty) throw InvalidArgument("cma_cli", "--primes takes finite primes only");
  return s.finite_primes;
}

inline std::string matrix_text(const MatQ& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + to_string(m(i, j));
    s += "]\n";
  }
  return s;
}

inline void certificate_text(const AmpleCertificate& c, std::ostream& out) {
  out << "verdict: " << to_string(c.verdict) << "\n";
  out << "ambient: " << c.ambient << "\nplaces: " << c.places << "\n";
  out << "rk_Q T = " << c.global_rank << ", rk_Q Z = " << c.center_rank << "\n";
  out << "local ranks:";
  for (std::size_t v = 0; v < c.place_list.size(); ++v)
    out << " " << c.place_list[v].short_str() << "=" << c.local_ranks[v];
  out << "\n";
  if (!c.reason.empty()) out << "reason: " << c.reason << "\n";
}

inline void report_text(const CmaReport& r, std::ostream& out) {
  certificate_text(r.certificate, out);
  if (r.generators) {
    out << "ring: " << r.generators->ring() << ", n = " << r.generators->n << "\n";
    auto part = [&](const char* name, const std::vector<Generator>& v) {
      for (const auto& g : v) out << name << " (" << g.origin << "):\n" << matrix_text(g.matrix);
    };
    part("torus", r.generators->torus);
    part("torsion", r.generators->torsion);
    part("normalizer", r.generators->normalizer);
    part("unipotent", r.generators->unipotent);
    out << "sanity: " << (r.sanity && r.sanity->ok() ? "pass" : "FAIL") << "\n";
  }
  for (const auto& c : r.caveats) out << "caveat: " << c << "\n";
}

}  // namespace detail

/// args excludes the program name.
inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"commensurably maximal amenable subgroups: tori, units, generators"};
  app.require_subcommand(1);
  bool as_json = false;
  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", as_json, "machine-readable output"); };

  std::string request_file, algebra_file, ambient = "SL", places, place, primes, verify_file, corpus;
  long box = 3;
  std::uint64_t budget = 1000000;
  bool norm_one = false;

  auto* construct = app.add_subcommand("construct", "run the pipeline on a request file");
  construct->add_option("--request", request_file, "request JSON")->required();
  json_flag(construct);

  auto* check = app.add_subcommand("check-ample", "decide S-ampleness of the torus of an algebra");
  check->add_option("--algebra", algebra_file, "algebra JSON")->required();
  check->add_option("--ambient", ambient, "SL or GL");
  check->add_option("--places", places, "e.g. inf,5")->required();
  json_flag(check);

  auto* units = app.add_subcommand("units", "search or verify a unit system");
  units->add_option("--algebra", algebra_file, "algebra JSON")->required();
  units->add_option("--primes", primes, "finite primes of S, e.g. 5,13");
  units->add_option("--box", box, "coordinate box of the search");
  units->add_option("--budget", budget, "candidate budget of the search");
  units->add_flag("--norm-one", norm_one, "report the norm-one subgroup");
  units->add_option("--verify", verify_file, "unit system JSON to verify instead of searching");
  json_flag(units);

  auto* local = app.add_subcommand("local-rank", "local rank of the torus at one place");
  local->add_option("--algebra", algebra_file, "algebra JSON")->required();
  local->add_option("--place", place, "inf or a prime")->required();
  local->add_option("--ambient", ambient, "SL or GL");
  json_flag(local);

  auto* paper = app.add_subcommand("verify-paper", "check the golden example corpus");
  paper->add_option("--corpus", corpus, "directory of example files");
  json_flag(paper);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    if (as_json) {
      out << io::dump(io::json{{"schema", io::kSchema},
                               {"error", {{"module", "cma_cli"}, {"kind", "usage"}, {"message", e.what()}}}});
    } else {
      err << "error: " << e.what() << "\n";
    }
    return 1;
  }

  try {
    const unsigned cap = precision_cap_from_env();
    if (*construct) {
      const io::json doc = io::read_json_file(request_file);
      const auto req = io::request_from_json(io::Cursor(doc));
      const auto rep = run_pipeline(req, cap);
      if (as_json) out << io::dump(io::to_json(rep));
      else detail::report_text(rep, out);
      return rep.exit_code();
    }
    if (*check) {
      const auto e = detail::load_algebra(algebra_file);
      const auto cert = is_s_ample(build_torus(e, parse_ambient(ambient)), PlaceSet::parse(places));
      if (as_json) {
        io::json j{{"schema", io::kSchema}};
        j["certificate"] = io::to_json(cert);
        out << io::dump(j);
      } else {
        detail::certificate_text(cert, out);
      }
      return cert.verdict == Verdict::Ample ? 0 : cert.verdict == Verdict::NotAmple ? 2 : 3;
    }
    if (*units) {
      const auto e = detail::load_algebra(algebra_file);
      UnitSystem sys;
      if (!verify_file.empty()) {
        const io::json doc = io::read_json_file(verify_file);
        sys = io::unit_system_from_json(io::Cursor(doc), e);
      } else {
        sys = compute_unit_system(e, detail::parse_primes(primes), box, budget);
        if (norm_one) sys = norm_one_subgroup(e, sys);
      }
      const auto cert = verify_unit_system(e, sys, cap);
      if (as_json) {
        io::json j{{"schema", io::kSchema}};
        j["units"] = io::to_json(sys);
        j["certificate"] = io::to_json(cert);
        out << io::dump(j);
      } else {
        for (const auto& t : sys.torsion)
          out << "torsion " << cma::detail::coords_str(t.element) << " of order " << t.order << "\n";
        for (const auto& u : sys.free) out << "free " << cma::detail::coords_str(u) << "\n";
        out << "rank " << cert.rank << " (Dirichlet rank " << cert.dirichlet_rank << ")\n";
        out << (cert.valid ? "certified" : "NOT certified");
        if (cert.valid && cert.independent) out << " at " << cert.precision_bits << " bits";
        out << "\n";
        for (const auto& f : cert.failures) out << "failure: " << f << "\n";
      }
      return cert.valid ? 0 : 1;
    }
    if (*local) {
      const auto e = detail::load_algebra(algebra_file);
      const Place p = Place::parse(place);
      const auto t = build_torus(e, parse_ambient(ambient));
      if (!p.is_infinite())
        for (const auto& f : e.factors()) require_unramified(f, p.p());
      const auto r = local_rank(t, p);
      if (as_json) out << io::dump(io::json{{"schema", io::kSchema}, {"place", p.short_str()}, {"ambient", ambient},
                                            {"local_rank", r}});
      else out << r << "\n";
      return 0;
    }
    if (*paper) {
      const auto rows = verify_paper_examples(corpus.empty() ? std::string(CMA_CORPUS_DIR) + "/paper" : corpus, cap);
      bool all = !rows.empty();
      io::json arr = io::json::array();
      for (const auto& r : rows) {
        all = all && r.passed;
        arr.push_back({{"example", r.example}, {"file", r.file}, {"passed", r.passed}, {"diffs", r.diffs},
                       {"caveats", r.caveats}});
        if (!as_json) {
          out << (r.passed ? "PASS " : "FAIL ") << r.example << " (" << r.file << ")\n";
          for (const auto& d : r.diffs) out << "  diff: " << d << "\n";
          for (const auto& c : r.caveats) out << "  note: " << c << "\n";
        }
      }
      if (as_json) out << io::dump(io::json{{"schema", io::kSchema}, {"examples", arr}, {"all_passed", all}});
      return all ? 0 : 1;
    }
  } catch (const Error& e) {
    if (as_json) {
      out << io::dump(io::error_json(e));
    } else {
      err << "error [" << e.module() << "/" << e.kind() << "]: " << e.what() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    if (as_json) {
      out << io::dump(io::json{{"schema", io::kSchema},
                               {"error", {{"module", "internal"}, {"kind", "exception"}, {"message", e.what()}}}});
    } else {
      err << "error: " << e.what() << "\n";
    }
    return 1;
  }
  return 1;
}

}  // namespace cma::cli
