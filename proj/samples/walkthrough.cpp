// Q(i) in SL_2: anisotropic over R, split at 5.
// Walks the library calls the CLI strings together, then runs one request file.

#include <iostream>

#include "cma/cma.hpp"

using namespace cma;

int main() {
  const auto e = EtaleAlgebra::power_basis({PolyZ{1, 0, 1}});
  const auto t = build_torus(e, Ambient::SL);
  std::cout << "rk_R = " << local_rank(t, Place::infinity()) << ", rk_Q5 = " << local_rank(t, Place::prime(5))
            << "\n";

  for (const char* s : {"inf", "inf,5", "inf,13"}) {
    const auto cert = is_s_ample(t, PlaceSet::parse(s));
    std::cout << "S = {" << s << "}: " << to_string(cert.verdict) << (cert.replay() ? "" : " (replay failed)")
              << "\n";
  }

  // ramified primes are refused, not guessed
  try {
    is_s_ample(t, PlaceSet::parse("inf,2"));
  } catch (const RamifiedPlace& err) {
    std::cout << "S = {inf,2}: " << err.what() << "\n";
  }

  // the norm-one S-units give the torus part of the group
  const auto units = norm_one_subgroup(e, compute_unit_system(e, {5}, 3));
  for (const auto& u : units.free)
    std::cout << "norm-one unit " << io::to_json(u).dump() << " -> " << io::to_json(e.regular_rep(u)).dump()
              << "\n";

  const auto doc = io::read_json_file(std::string(CMA_SAMPLES_DIR) + "/requests/real_quadratic.json");
  const auto rep = run_pipeline(io::request_from_json(io::Cursor(doc)));
  std::cout << "\nreal quadratic request, exit code " << rep.exit_code() << ":\n";
  std::cout << io::to_json(*rep.generators).dump() << "\n";

  const auto again = group_sanity(*rep.generators);
  for (const auto& c : again.checks) std::cout << (c.passed ? "  ok   " : "  FAIL ") << c.name << "\n";
  return again.ok() && rep.exit_code() == 0 ? 0 : 1;
}
