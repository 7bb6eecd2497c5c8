#pragma once

// JSON (de)serialization, schema "cma/1". Rationals are strings "a" or
// "a/b" in lowest terms, matrices are row-major arrays of such strings.
// Parse errors carry a JSON pointer to the offending value.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cma/groups/matrix_groups.hpp"
#include "cma/torus/torus.hpp"
#include "cma/units/units.hpp"

namespace cma::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "cma/1";

/// A value together with its JSON pointer, for error messages.
class Cursor {
 public:
  Cursor(const json& j, std::string ptr = "") : j_(&j), ptr_(std::move(ptr)) {}

  const json& value() const { return *j_; }
  const std::string& pointer() const { return ptr_; }
  [[noreturn]] void fail(const std::string& what) const { throw InvalidInput(ptr_, what); }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Cursor at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) throw InvalidInput(ptr_ + "/" + key, "missing field");
    return Cursor(*it, ptr_ + "/" + key);
  }
  Cursor at(std::size_t i) const { return Cursor((*j_)[i], ptr_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }
  std::string str() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected a boolean");
    return j_->get<bool>();
  }
  BigRat rational() const {
    if (j_->is_number_integer()) return BigRat(j_->get<long>());
    try {
      return parse_rational(str());
    } catch (const InvalidArgument& e) {
      fail(e.what());
    }
  }

 private:
  const json* j_;
  std::string ptr_;
};

// --- writing ---------------------------------------------------------------

inline json to_json(const BigRat& q) { return to_string(q); }

inline json to_json(const std::vector<BigRat>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline json to_json(const AlgebraElement& a) { return to_json(a.coords); }

inline json to_json(const MatQ& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

inline json poly_to_json(const PolyZ& f) {
  json a = json::array();
  for (int k = 0; k <= f.degree(); ++k) a.push_back(f.coeff(static_cast<std::size_t>(k)).get_str());
  return a;
}

inline json to_json(const EtaleAlgebra& e) {
  json j;
  json fs = json::array();
  for (const auto& f : e.factors()) fs.push_back(poly_to_json(f));
  j["factors"] = fs;
  j["order_basis"] = to_json(e.order_basis());
  return j;
}

inline json to_json(const UnitSystem& s) {
  json j;
  json t = json::array();
  for (const auto& g : s.torsion) t.push_back({{"element", to_json(g.element)}, {"order", g.order}});
  j["torsion"] = t;
  json f = json::array();
  for (const auto& u : s.free) f.push_back(to_json(u));
  j["free"] = f;
  j["s_primes"] = s.s_primes;
  return j;
}

inline json to_json(const UnitCertificate& c) {
  json j;
  j["valid"] = c.valid;
  j["independent"] = c.independent;
  j["rank"] = c.rank;
  j["dirichlet_rank"] = c.dirichlet_rank;
  j["precision_bits"] = c.precision_bits;
  j["minor_columns"] = c.minor_columns;
  j["column_labels"] = c.column_labels;
  json le = json::array();
  for (const auto& row : c.log_embedding) {
    json r = json::array();
    for (const auto& iv : row) r.push_back(json::array({to_string(iv.lo()), to_string(iv.hi())}));
    le.push_back(r);
  }
  j["log_embedding"] = le;
  j["relation"] = c.relation ? json(*c.relation) : json(nullptr);
  j["failures"] = c.failures;
  j["caveat"] = c.caveat;
  return j;
}

inline json to_json(const AmpleCertificate& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["ambient"] = c.ambient;
  j["places"] = c.places;
  j["global_rank"] = c.global_rank;
  j["center_rank"] = c.center_rank;
  j["condition_i"] = c.condition_i;
  j["condition_ii"] = c.condition_ii;
  j["condition_iii"] = c.condition_iii;
  j["multiplicity_free"] = c.multiplicity_free;
  j["reason"] = c.reason;
  json lr = json::array();
  for (std::size_t v = 0; v < c.place_list.size(); ++v)
    lr.push_back({{"place", c.place_list[v].short_str()}, {"rank", c.local_ranks[v]}});
  j["local_ranks"] = lr;
  json comps = json::array();
  for (std::size_t k = 0; k < c.component_characters.size(); ++k) {
    json cj{{"character", c.component_characters[k]}, {"dimension", c.component_dims[k]}};
    cj["invariants"] = k < c.component_invariants.size() ? json(c.component_invariants[k]) : json::array();
    comps.push_back(cj);
  }
  j["components"] = comps;
  auto wit = [](const SubmoduleWitness& w) {
    json x{{"components", w.components}, {"dimension", w.dimension}};
    x["place"] = w.place ? json(w.place->short_str()) : json(nullptr);
    x["sub_rank"] = w.sub_rank;
    x["full_rank"] = w.full_rank;
    return x;
  };
  json ws = json::array();
  for (const auto& w : c.witnesses) ws.push_back(wit(w));
  j["witnesses"] = ws;
  j["violation"] = c.violation ? wit(*c.violation) : json(nullptr);
  return j;
}

inline json to_json(const GeneratorSet& g) {
  json j;
  j["ring"] = g.ring();
  j["n"] = g.n;
  j["ambient"] = to_string(g.ambient);
  json prov;
  auto part = [&](const char* name, const std::vector<Generator>& v) {
    json a = json::array(), p = json::array();
    for (const auto& x : v) {
      a.push_back(to_json(x.matrix));
      p.push_back(x.origin);
    }
    j[name] = a;
    prov[name] = p;
  };
  part("torus", g.torus);
  part("torsion", g.torsion);
  part("normalizer", g.normalizer);
  part("unipotent", g.unipotent);
  json orders = json::array();
  for (const auto& t : g.torsion) orders.push_back(t.order);
  j["torsion_orders"] = orders;
  j["provenance"] = prov;
  return j;
}

inline json to_json(const SanityReport& r) {
  json j;
  j["ok"] = r.ok();
  json cs = json::array();
  for (const auto& c : r.checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = cs;
  return j;
}

inline json error_json(const Error& e) {
  json err{{"module", e.module()}, {"kind", e.kind()}, {"message", e.what()}};
  if (auto* ii = dynamic_cast<const InvalidInput*>(&e)) err["pointer"] = ii->pointer().empty() ? "/" : ii->pointer();
  return json{{"schema", kSchema}, {"error", err}};
}

// --- reading ---------------------------------------------------------------

inline std::vector<BigRat> rational_vector(const Cursor& c) {
  std::vector<BigRat> v;
  for (std::size_t i = 0; i < c.size(); ++i) v.push_back(c.at(i).rational());
  return v;
}

inline MatQ matrix_from_json(const Cursor& c) {
  const std::size_t r = c.size();
  if (r == 0) c.fail("empty matrix");
  std::vector<std::vector<BigRat>> rows;
  for (std::size_t i = 0; i < r; ++i) {
    rows.push_back(rational_vector(c.at(i)));
    if (rows.back().size() != rows.front().size()) c.at(i).fail("ragged matrix row");
  }
  return MatQ::from_rows(rows);
}

inline PolyZ poly_from_json(const Cursor& c) {
  std::vector<BigInt> co;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const BigRat q = c.at(i).rational();
    if (!is_integer(q)) c.at(i).fail("polynomial coefficients must be integers");
    co.push_back(q.get_num());
  }
  if (co.empty()) c.fail("empty polynomial");
  if (co.back() != 1) c.fail("polynomial must be monic (coefficients listed from the constant term up)");
  return PolyZ(co);
}

/// Errors from the algebra constructor are re-raised with a pointer.
inline EtaleAlgebra algebra_from_json(const Cursor& c) {
  const Cursor fs = c.at("factors");
  std::vector<PolyZ> factors;
  std::size_t n = 0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    factors.push_back(poly_from_json(fs.at(k)));
    n += static_cast<std::size_t>(factors.back().degree());
  }
  if (factors.empty()) fs.fail("no factors");
  MatQ basis = MatQ::identity(n);
  if (c.has("order_basis")) basis = matrix_from_json(c.at("order_basis"));
  try {
    EtaleAlgebra e(factors, basis);
    auto chk = e.is_order();
    if (!chk.ok) {
      const auto& w = *chk.witness;
      c.at("order_basis").fail("basis does not span an order: b_" + std::to_string(w.i) + " * b_" +
                               std::to_string(w.j) + " has coordinate " + std::to_string(w.k) + " equal to " +
                               to_string(w.value));
    }
    return e;
  } catch (const InvalidInput&) {
    throw;
  } catch (const Error& e) {
    c.fail(e.what());
  }
}

inline AlgebraElement element_from_json(const Cursor& c, const EtaleAlgebra& e) {
  auto v = rational_vector(c);
  if (v.size() != e.degree()) c.fail("expected " + std::to_string(e.degree()) + " coordinates");
  return AlgebraElement(v);
}

inline UnitSystem unit_system_from_json(const Cursor& c, const EtaleAlgebra& e) {
  UnitSystem s;
  if (c.has("s_primes")) {
    const Cursor sp = c.at("s_primes");
    for (std::size_t i = 0; i < sp.size(); ++i) {
      const long p = sp.at(i).integer();
      if (p < 2) sp.at(i).fail("not a prime");
      s.s_primes.push_back(static_cast<std::uint64_t>(p));
    }
  }
  const Cursor t = c.at("torsion");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const long ord = t.at(i).at("order").integer();
    if (ord < 1) t.at(i).at("order").fail("order must be positive");
    s.torsion.push_back({element_from_json(t.at(i).at("element"), e), static_cast<std::size_t>(ord)});
  }
  const Cursor f = c.at("free");
  for (std::size_t i = 0; i < f.size(); ++i) s.free.push_back(element_from_json(f.at(i), e));
  return s;
}

inline std::vector<AutomorphismDatum> automorphisms_from_json(const Cursor& c, const EtaleAlgebra& e) {
  std::vector<AutomorphismDatum> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    AutomorphismDatum s;
    const Cursor im = c.at(i);
    for (std::size_t j = 0; j < im.size(); ++j) s.images.push_back(element_from_json(im.at(j), e));
    auto chk = verify_automorphism(e, s);
    if (!chk.ok) im.fail("not an automorphism of the order: " + chk.reason);
    out.push_back(std::move(s));
  }
  return out;
}

inline PlaceSet places_from_json(const Cursor& c) {
  try {
    if (c.value().is_string()) return PlaceSet::parse(c.str());
    std::string joined;
    for (std::size_t i = 0; i < c.size(); ++i) joined += (i ? "," : "") + c.at(i).str();
    return PlaceSet::parse(joined);
  } catch (const InvalidInput&) {
    throw;
  } catch (const Error& e) {
    c.fail(e.what());
  }
}

inline Ambient ambient_from_json(const Cursor& c) {
  try {
    return parse_ambient(c.str());
  } catch (const InvalidInput&) {
    throw;
  } catch (const Error& e) {
    c.fail(e.what());
  }
}

inline GeneratorSet generator_set_from_json(const Cursor& c) {
  GeneratorSet g;
  const long n = c.at("n").integer();
  if (n < 1) c.at("n").fail("n must be positive");
  g.n = static_cast<std::size_t>(n);
  if (c.has("ambient")) g.ambient = ambient_from_json(c.at("ambient"));
  if (c.has("s_primes")) {
    const Cursor sp = c.at("s_primes");
    for (std::size_t i = 0; i < sp.size(); ++i) g.s_primes.push_back(static_cast<std::uint64_t>(sp.at(i).integer()));
  } else if (c.has("ring")) {
    // "Z[1/5,1/13]"
    const std::string ring = c.at("ring").str();
    if (ring != "Z") {
      if (ring.size() < 4 || ring.substr(0, 2) != "Z[" || ring.back() != ']') c.at("ring").fail("unknown ring");
      std::stringstream ss(ring.substr(2, ring.size() - 3));
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.rfind("1/", 0) != 0) c.at("ring").fail("unknown ring");
        try {
          g.s_primes.push_back(std::stoull(item.substr(2)));
        } catch (const std::exception&) {
          c.at("ring").fail("unknown ring");
        }
      }
    }
  }
  auto part = [&](const char* name, std::vector<Generator>& v) {
    if (!c.has(name)) return;
    const Cursor a = c.at(name);
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back({matrix_from_json(a.at(i)), "", 0});
    if (c.has("provenance") && c.at("provenance").has(name)) {
      const Cursor p = c.at("provenance").at(name);
      for (std::size_t i = 0; i < p.size() && i < v.size(); ++i) v[i].origin = p.at(i).str();
    }
  };
  part("torus", g.torus);
  part("torsion", g.torsion);
  part("normalizer", g.normalizer);
  part("unipotent", g.unipotent);
  if (c.has("torsion_orders")) {
    const Cursor o = c.at("torsion_orders");
    if (o.size() != g.torsion.size()) o.fail("one order per torsion generator expected");
    for (std::size_t i = 0; i < o.size(); ++i) g.torsion[i].order = static_cast<std::size_t>(o.at(i).integer());
  }
  return g;
}

inline void check_schema(const Cursor& c) {
  if (!c.has("schema")) return;
  if (c.at("schema").str() != kSchema) c.at("schema").fail("unsupported schema (expected cma/1)");
}

/// Pretty printing used for every emitted document: two-space indent,
/// trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cma::io
