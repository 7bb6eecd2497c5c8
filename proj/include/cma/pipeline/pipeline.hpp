#pragma once

// From an etale algebra and a place set to an ampleness certificate and a
// generator set of the associated arithmetic group, plus the corpus
// checker for the worked examples.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cma/galois/places.hpp"
#include "cma/groups/conjugator.hpp"
#include "cma/io/json.hpp"

namespace cma {

struct UnipotentBlock {
  std::size_t n = 0;
  std::string pattern = "last-column";
};

struct UnitSource {
  bool provided = false;
  long box = 3;
  std::uint64_t budget = 1000000;
  std::optional<UnitSystem> system;
};

struct PipelineRequest {
  EtaleAlgebra algebra;
  Ambient ambient = Ambient::SL;
  PlaceSet places;
  std::optional<UnipotentBlock> unipotent_block;
  UnitSource units;
  std::optional<std::vector<AutomorphismDatum>> automorphisms;
  long automorphism_box = 50;
};

struct GaloisSummary {
  std::string group;
  Signature signature;
};

struct CmaReport {
  std::optional<EtaleAlgebra> algebra;
  std::vector<GaloisSummary> galois;
  AmpleCertificate certificate;
  std::optional<UnitSystem> units;  // the full (S-)unit system
  std::optional<UnitCertificate> unit_certificate;
  std::optional<UnitSystem> torus_units;  // norm one in SL_n, else the full system
  std::optional<UnitCertificate> torus_unit_certificate;
  std::vector<AutomorphismDatum> automorphisms;
  std::optional<GeneratorSet> generators;
  std::optional<SanityReport> sanity;
  std::vector<std::string> caveats;

  int exit_code() const {
    switch (certificate.verdict) {
      case Verdict::Ample: return 0;
      case Verdict::NotAmple: return 2;
      default: return 3;
    }
  }
};

inline unsigned precision_cap_from_env(unsigned fallback = 256) {
  const char* v = std::getenv("CMA_PRECISION_CAP");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const unsigned long cap = std::strtoul(v, &end, 10);
  if (*end != '\0' || cap < 64 || cap > 65536)
    throw InvalidArgument("cma_cli", "CMA_PRECISION_CAP must be an integer in [64, 65536]");
  return static_cast<unsigned>(cap);
}

namespace detail {

inline std::string coords_str(const AlgebraElement& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + to_string(a[i]);
  return s + ")";
}

/// Generators of the subgroup of auts (identity first) by greedy closure.
inline std::vector<std::size_t> automorphism_generators(const EtaleAlgebra& e,
                                                        const std::vector<AutomorphismDatum>& auts) {
  std::vector<std::size_t> chosen;
  std::set<AutomorphismDatum> closure{identity_automorphism(e)};
  for (std::size_t i = 1; i < auts.size(); ++i) {
    if (closure.count(auts[i])) continue;
    chosen.push_back(i);
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& s : std::set<AutomorphismDatum>(closure))
        for (auto k : chosen) {
          auto c = compose(e, s, auts[k]);
          if (closure.insert(c).second) grew = true;
        }
    }
  }
  return chosen;
}

/// A unit of the system with the given norm: zeta prod u_i^{e_i}, e_i in
/// {-1, 0, 1}, first in canonical order.
inline std::optional<AlgebraElement> unit_of_norm(const EtaleAlgebra& e, const UnitSystem& sys, const BigRat& target) {
  std::vector<AlgebraElement> found;
  const auto tors = torsion_elements(e, sys.torsion);
  const std::size_t r = sys.free.size();
  if (r > 6) return std::nullopt;
  std::vector<BigInt> ex(r, BigInt(-1));
  while (true) {
    auto base = detail::power_product(e, sys.free, ex);
    for (const auto& z : tors) {
      auto c = e.mul(z, base);
      if (e.norm(c) == target) found.push_back(c);
    }
    std::size_t i = 0;
    while (i < r && ex[i] == 1) ex[i++] = -1;
    if (i == r) break;
    ex[i] += 1;
  }
  if (found.empty()) return std::nullopt;
  return *std::min_element(found.begin(), found.end(), canonical_less);
}

}  // namespace detail

inline CmaReport run_pipeline(const PipelineRequest& req, unsigned precision_cap = 256) {
  const EtaleAlgebra& e = req.algebra;
  CmaReport rep;
  rep.algebra = e;
  for (const auto& f : e.factors()) rep.galois.push_back({galois_group_small(f).group, signature(f)});
  const std::size_t n = e.degree();
  const auto& block = req.unipotent_block;
  Ambient cert_ambient = req.ambient;
  std::size_t group_n = n;
  if (block) {
    if (block->pattern != "last-column")
      throw Unsupported("cma_cli", "only the last-column unipotent pattern is supported");
    if (req.ambient != Ambient::SL) throw Unsupported("cma_cli", "unipotent blocks are built inside SL_n'");
    if (block->n != n + 1) throw Unsupported("cma_cli", "unipotent blocks need n' = n + 1");
    cert_ambient = Ambient::GL;
    group_n = n + 1;
    rep.caveats.push_back("torus certified in the Levi factor GL_" + std::to_string(n) + " of the parabolic in SL_" +
                          std::to_string(group_n));
  }
  req.places.validate(req.ambient, group_n);
  rep.certificate = is_s_ample(build_torus(e, cert_ambient), req.places);
  if (rep.certificate.verdict != Verdict::Ample) {
    rep.caveats.push_back("generators are only emitted for S-ample tori");
    return rep;
  }

  // units
  const auto& sp = req.places.finite_primes;
  UnitSystem sys;
  if (req.units.provided) {
    sys = *req.units.system;
    std::sort(sys.s_primes.begin(), sys.s_primes.end());
    if (sys.s_primes != sp)
      throw InvalidInput("/unit_source/provided/s_primes", "must list the finite places of S");
  } else {
    sys = compute_unit_system(e, sp, req.units.box, req.units.budget);
  }
  rep.unit_certificate = verify_unit_system(e, sys, precision_cap);
  if (!rep.unit_certificate->valid) {
    const std::string why = rep.unit_certificate->failures.empty() ? "invalid" : rep.unit_certificate->failures[0];
    if (req.units.provided) throw InvalidInput("/unit_source/provided", "unit system rejected: " + why);
    throw InvalidArgument("units", "unit system rejected: " + why);
  }
  if (rep.unit_certificate->rank != rep.unit_certificate->dirichlet_rank) {
    if (req.units.provided)
      throw InvalidInput("/unit_source/provided/free",
                         "expected " + std::to_string(rep.unit_certificate->dirichlet_rank) + " free generators");
    throw NoSuchElement("units", "unit rank below the Dirichlet rank");
  }
  rep.caveats.push_back(rep.unit_certificate->caveat);
  rep.units = sys;
  const bool norm_one = req.ambient == Ambient::SL && !block;
  rep.torus_units = norm_one ? norm_one_subgroup(e, sys) : sys;
  rep.torus_unit_certificate = verify_unit_system(e, *rep.torus_units, precision_cap);

  // automorphisms
  if (req.automorphisms) {
    rep.automorphisms = {identity_automorphism(e)};
    for (const auto& s : *req.automorphisms)
      if (std::find(rep.automorphisms.begin(), rep.automorphisms.end(), s) == rep.automorphisms.end())
        rep.automorphisms.push_back(s);
  } else {
    rep.automorphisms = enumerate_automorphisms(e, req.automorphism_box);
    if (e.num_factors() > 1) rep.caveats.push_back("automorphisms permuting isomorphic factors are not searched");
  }

  // generators
  GeneratorSet g;
  g.n = group_n;
  g.ambient = req.ambient;
  g.s_primes = sp;
  auto embed = [&](const AlgebraElement& a) {
    MatQ m = e.regular_rep(a);
    if (block) return block_diagonal(m, MatQ::scalar(1, BigRat(1) / e.norm(a)));
    return m;
  };
  for (const auto& u : rep.torus_units->free) g.torus.push_back({embed(u), "unit " + detail::coords_str(u), 0});
  for (const auto& t : rep.torus_units->torsion)
    if (t.order > 1) g.torsion.push_back({embed(t.element), "root of unity " + detail::coords_str(t.element), t.order});
  for (auto k : detail::automorphism_generators(e, rep.automorphisms)) {
    const MatQ a = automorphism_matrix(e, rep.automorphisms[k]);
    const BigRat d = determinant(a);
    const std::string label = "automorphism " + std::to_string(k);
    if (block) {
      g.normalizer.push_back({block_diagonal(a, MatQ::scalar(1, d)), label, 0});
    } else if (req.ambient == Ambient::GL || d == 1) {
      g.normalizer.push_back({a, label, 0});
    } else if (auto t = detail::unit_of_norm(e, sys, BigRat(1) / d)) {
      g.normalizer.push_back({a * e.regular_rep(*t), label + " times unit " + detail::coords_str(*t), 0});
    } else {
      rep.caveats.push_back(label + " has determinant " + to_string(d) +
                            " and no unit of norm " + to_string(BigRat(1) / d) + " was found; it is left out");
    }
  }
  if (block)
    for (std::size_t i = 1; i <= n; ++i)
      g.unipotent.push_back({elementary_matrix(group_n, i, group_n),
                             "E_{" + std::to_string(i) + "," + std::to_string(group_n) + "}", 0});
  auto sanity = group_sanity(g);
  if (!sanity.ok())
    throw Error("cma_cli", "emitted generators fail group_sanity: " + sanity.first_failure()->name + ": " +
                               sanity.first_failure()->detail);
  rep.generators = std::move(g);
  rep.sanity = std::move(sanity);
  rep.caveats.push_back("the generated group is commensurable with the arithmetic group; equality is not certified");
  return rep;
}

// --- JSON ---------------------------------------------------------------------

namespace io {

inline PipelineRequest request_from_json(const Cursor& c) {
  check_schema(c);
  PipelineRequest req{algebra_from_json(c.at("algebra")), Ambient::SL, {}, std::nullopt, {}, std::nullopt, 50};
  req.ambient = ambient_from_json(c.at("ambient"));
  req.places = places_from_json(c.at("places"));
  try {
    req.places.validate(req.ambient, req.algebra.degree());
  } catch (const InvalidArgument& e) {
    c.at("places").fail(e.what());
  }
  if (c.has("unipotent_block") && !c.at("unipotent_block").value().is_null()) {
    const Cursor b = c.at("unipotent_block");
    UnipotentBlock ub;
    const long bn = b.at("n").integer();
    if (bn < static_cast<long>(req.algebra.degree())) b.at("n").fail("n' must be at least n");
    ub.n = static_cast<std::size_t>(bn);
    if (b.has("pattern")) ub.pattern = b.at("pattern").str();
    if (ub.pattern != "last-column" && ub.pattern != "none") b.at("pattern").fail("unknown pattern");
    if (ub.pattern != "none") req.unipotent_block = ub;
  }
  if (c.has("unit_source")) {
    const Cursor u = c.at("unit_source");
    if (u.has("provided")) {
      req.units.provided = true;
      req.units.system = unit_system_from_json(u.at("provided"), req.algebra);
    } else if (u.has("search")) {
      const Cursor s = u.at("search");
      if (s.has("box")) {
        req.units.box = s.at("box").integer();
        if (req.units.box < 1 || req.units.box > 50) s.at("box").fail("box must be in [1, 50]");
      }
      if (s.has("budget")) {
        const long b = s.at("budget").integer();
        if (b < 1) s.at("budget").fail("budget must be positive");
        req.units.budget = static_cast<std::uint64_t>(b);
      }
    } else {
      u.fail("expected \"search\" or \"provided\"");
    }
  }
  if (c.has("automorphisms")) req.automorphisms = automorphisms_from_json(c.at("automorphisms"), req.algebra);
  if (c.has("automorphism_box")) req.automorphism_box = c.at("automorphism_box").integer();
  return req;
}

inline json to_json(const CmaReport& r) {
  json j;
  j["schema"] = kSchema;
  j["algebra"] = r.algebra ? to_json(*r.algebra) : json(nullptr);
  json gal = json::array();
  for (const auto& g : r.galois)
    gal.push_back({{"group", g.group}, {"signature", json::array({g.signature.r1, g.signature.r2})}});
  j["galois"] = gal;
  j["certificate"] = to_json(r.certificate);
  auto units = [](const std::optional<UnitSystem>& s, const std::optional<UnitCertificate>& c) {
    if (!s) return json(nullptr);
    json x = to_json(*s);
    x["certificate"] = c ? to_json(*c) : json(nullptr);
    return x;
  };
  j["units"] = units(r.units, r.unit_certificate);
  j["torus_units"] = units(r.torus_units, r.torus_unit_certificate);
  json auts = json::array();
  for (const auto& s : r.automorphisms) {
    json im = json::array();
    for (const auto& x : s.images) im.push_back(to_json(x));
    auts.push_back(im);
  }
  j["automorphisms"] = auts;
  j["generators"] = r.generators ? to_json(*r.generators) : json(nullptr);
  j["sanity"] = r.sanity ? to_json(*r.sanity) : json(nullptr);
  j["caveats"] = r.caveats;
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("", std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

}  // namespace io

// --- the worked examples --------------------------------------------------

struct ExampleRow {
  std::string example;
  std::string file;
  bool passed = false;
  std::vector<std::string> diffs;
  std::vector<std::string> caveats;
  double seconds = 0;
};

namespace detail {

inline std::string show(const MatQ& m) { return io::to_json(m).dump(); }

inline void expect_matrices(const io::Cursor& c, const char* name, const std::vector<Generator>& got,
                            std::vector<std::string>& diffs, const std::string& where) {
  if (!c.has(name)) return;
  const io::Cursor want = c.at(name);
  if (want.size() != got.size()) {
    diffs.push_back(where + name + ": expected " + std::to_string(want.size()) + " matrices, got " +
                    std::to_string(got.size()));
    return;
  }
  for (std::size_t i = 0; i < got.size(); ++i) {
    const MatQ w = io::matrix_from_json(want.at(i));
    if (!(w == got[i].matrix))
      diffs.push_back(where + name + "[" + std::to_string(i) + "]: expected " + show(w) + ", got " +
                      show(got[i].matrix));
  }
}

/// Imported generators: sanity, normalization, then the bounded conjugator
/// search against the emitted set.
inline void check_imported(const io::Cursor& c, const CmaReport& rep, std::vector<std::string>& diffs,
                           std::vector<std::string>& caveats, const std::string& where) {
  const GeneratorSet theirs = io::generator_set_from_json(c);
  auto san = group_sanity(theirs);
  if (!san.ok()) diffs.push_back(where + "imported generators fail " + san.first_failure()->name);
  const EtaleAlgebra& e = *rep.algebra;
  for (std::size_t i = 0; i < theirs.normalizer.size(); ++i) {
    auto chk = verify_normalization(e, theirs.normalizer[i].matrix);
    if (!chk.ok) {
      diffs.push_back(where + "imported normalizer " + std::to_string(i + 1) + " fails at basis element " +
                      std::to_string(chk.failing_index));
    } else if (!detail::find_automorphism(rep.automorphisms, *chk.sigma)) {
      diffs.push_back(where + "imported normalizer " + std::to_string(i + 1) + " induces an unknown automorphism");
    }
  }
  for (const auto* part : {&theirs.torus, &theirs.torsion})
    for (const auto& g : *part)
      if (!verify_normalization(e, g.matrix).ok || !e.from_regular_rep(g.matrix))
        diffs.push_back(where + "imported torus matrix " + g.origin + " is not in pi(E)");
  if (!rep.generators || !rep.torus_units) {
    diffs.push_back(where + "no emitted generators to compare with");
    return;
  }
  TorusFrame fr{&e, *rep.torus_units, rep.automorphisms};
  auto res = find_conjugator(fr, *rep.generators, theirs);
  if (res.found) {
    caveats.push_back(where + "imported generators conjugate to the emitted ones by " + show(*res.conjugator));
  } else {
    for (const auto& cv : res.caveats) caveats.push_back(where + cv);
    caveats.push_back(where + "weaker certificate only: imported matrices pass sanity and normalization");
  }
}

inline void check_case(const io::Cursor& cs, std::vector<std::string>& diffs, std::vector<std::string>& caveats,
                       const std::string& where, unsigned cap) {
  const auto req = io::request_from_json(cs.at("request"));
  const auto rep = run_pipeline(req, cap);
  const io::Cursor ex = cs.at("expect");
  if (ex.has("verdict")) {
    const std::string want = ex.at("verdict").str(), got = to_string(rep.certificate.verdict);
    if (want != got) diffs.push_back(where + "verdict: expected " + want + ", got " + got);
  }
  if (ex.has("galois_group")) {
    const std::string want = ex.at("galois_group").str(), got = rep.galois.at(0).group;
    if (want != got) diffs.push_back(where + "galois group: expected " + want + ", got " + got);
  }
  if (ex.has("signature")) {
    const io::Cursor s = ex.at("signature");
    const Signature want{static_cast<int>(s.at(0).integer()), static_cast<int>(s.at(1).integer())};
    const Signature got = rep.galois.at(0).signature;
    if (!(want == got))
      diffs.push_back(where + "signature: expected (" + std::to_string(want.r1) + "," + std::to_string(want.r2) +
                      "), got (" + std::to_string(got.r1) + "," + std::to_string(got.r2) + ")");
  }
  if (ex.has("local_ranks")) {
    const auto& want = ex.at("local_ranks").value();
    for (auto it = want.begin(); it != want.end(); ++it) {
      const Place p = Place::parse(it.key());
      auto pos = std::find(rep.certificate.place_list.begin(), rep.certificate.place_list.end(), p);
      if (pos == rep.certificate.place_list.end()) {
        diffs.push_back(where + "local rank at " + it.key() + ": place not in S");
        continue;
      }
      const auto got = rep.certificate.local_ranks[static_cast<std::size_t>(pos - rep.certificate.place_list.begin())];
      if (got != it.value().get<std::size_t>())
        diffs.push_back(where + "local rank at " + it.key() + ": expected " + it.value().dump() + ", got " +
                        std::to_string(got));
    }
  }
  if (ex.has("unit_rank")) {
    const std::size_t want = static_cast<std::size_t>(ex.at("unit_rank").integer());
    const std::size_t got = rep.torus_units ? rep.torus_units->free.size() : 0;
    if (want != got)
      diffs.push_back(where + "unit rank: expected " + std::to_string(want) + ", got " + std::to_string(got));
  }
  if (ex.has("certified_units") && ex.at("certified_units").boolean()) {
    if (!rep.torus_unit_certificate || !rep.torus_unit_certificate->valid || !rep.torus_unit_certificate->independent)
      diffs.push_back(where + "torus units are not certified independent");
  }
  if (ex.has("no_generators") && ex.at("no_generators").boolean() && rep.generators)
    diffs.push_back(where + "generators emitted for a non-ample torus");
  if (ex.has("generators")) {
    if (!rep.generators) {
      diffs.push_back(where + "no generators emitted");
    } else {
      const io::Cursor g = ex.at("generators");
      for (const char* part : {"torus", "torsion", "normalizer", "unipotent"}) {
        const std::vector<Generator>* got = std::string(part) == "torus"    ? &rep.generators->torus
                                            : std::string(part) == "torsion" ? &rep.generators->torsion
                                            : std::string(part) == "normalizer" ? &rep.generators->normalizer
                                                                               : &rep.generators->unipotent;
        expect_matrices(g, part, *got, diffs, where);
      }
      if (g.has("ring") && g.at("ring").str() != rep.generators->ring())
        diffs.push_back(where + "ring: expected " + g.at("ring").str() + ", got " + rep.generators->ring());
    }
  }
  if (ex.has("sanity") && ex.at("sanity").boolean() && !(rep.sanity && rep.sanity->ok()))
    diffs.push_back(where + "sanity checks do not pass");
  if (ex.has("semidirect") && ex.at("semidirect").boolean()) {
    std::vector<MatQ> uni;
    if (rep.generators)
      for (const auto& u : rep.generators->unipotent) uni.push_back(u.matrix);
    if (!rep.generators || uni.empty() || !verify_semidirect(rep.generators->levi(), uni).ok)
      diffs.push_back(where + "semidirect structure fails");
  }
  if (ex.has("imported")) check_imported(ex.at("imported"), rep, diffs, caveats, where);
}

}  // namespace detail

/// One row per example file (*.json, sorted by name) in the directory.
inline std::vector<ExampleRow> verify_paper_examples(const std::string& dir, unsigned precision_cap = 256) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) throw InvalidInput("", "corpus directory " + dir + " does not exist");
  for (const auto& ent : fs::directory_iterator(dir))
    if (ent.path().extension() == ".json") files.push_back(ent.path());
  std::sort(files.begin(), files.end());
  std::vector<ExampleRow> rows;
  for (const auto& f : files) {
    ExampleRow row;
    row.file = f.filename().string();
    row.example = f.stem().string();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const io::json doc = io::read_json_file(f.string());
      const io::Cursor c(doc);
      io::check_schema(c);
      if (c.has("example")) row.example = c.at("example").str();
      const io::Cursor cases = c.at("cases");
      for (std::size_t i = 0; i < cases.size(); ++i)
        detail::check_case(cases.at(i), row.diffs, row.caveats,
                           cases.size() > 1 ? "case " + std::to_string(i + 1) + ": " : "", precision_cap);
    } catch (const Error& e) {
      row.diffs.push_back(std::string("error: ") + e.what());
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.passed = row.diffs.empty();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cma
