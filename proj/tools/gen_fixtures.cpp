// Writes the bundled fixture files (referenced by the test suites, the CLI
// examples in the README, and anyone wanting known inputs) into a directory.

#include <filesystem>
#include <iostream>

#include "crm/crm.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path dir = argc > 1 ? argv[1] : "fixtures";
  fs::create_directories(dir);

  using namespace crm;
  const auto write_op = [&](const std::string& name, const BipartiteOperator& a) {
    save_json((dir / (name + ".json")).string(), operator_to_json(a));
    std::cout << name << ".json\n";
  };
  const auto write_bases = [&](const std::string& name, const MubSet& ms) {
    save_json((dir / (name + ".json")).string(), mubset_to_json(ms));
    std::cout << name << ".json\n";
  };

  for (Eigen::Index k : {2, 3, 4})
    write_op("uut_k" + std::to_string(k), counterexample(CounterexampleKind::uut, k));
  for (Eigen::Index k : {3, 4})
    write_op("lemma45_k" + std::to_string(k),
             counterexample(CounterexampleKind::lemma45, k));
  write_op("invariant_not_ppt_k3",
           counterexample(CounterexampleKind::invariant_not_ppt, 3));

  for (Eigen::Index k : {2, 3}) {
    const CVector u = max_entangled_u(k).vec;
    write_op("id_plus_uut_k" + std::to_string(k),
             BipartiteOperator(k, k, CMatrix::Identity(k * k, k * k) +
                                         u * u.transpose()));
    write_op("identity_k" + std::to_string(k),
             BipartiteOperator(k, k, CMatrix::Identity(k * k, k * k)));
  }

  write_op("a_alpha_canonical_k3",
           a_alpha(Basis(3, CMatrix::Identity(3, 3))));
  write_op("separable_k2_m2_seed1", random_separable(2, 2, 3, 1));
  write_op("spc_k3_seed1", random_spc(3, 1));

  const MubSet p2 = generate_prime(2);
  write_bases("mub_k2_full", p2);
  write_bases("mub_k2_pair", MubSet{2, {p2.bases[0], p2.bases[1]}});
  const MubSet p3 = generate_prime(3);
  write_bases("mub_p3_full", p3);
  write_bases("mub_p3_drop0", MubSet{3, {p3.bases.begin() + 1, p3.bases.end()}});
  return 0;
}
