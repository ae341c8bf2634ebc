// Command-line front end: classification, decomposition, Schmidt analysis,
// the S4 dictionary, and MUB tooling over JSON matrix/basis files.
//
// Exit codes: 0 success, 1 negative verification verdict (report still
// emitted), 2 usage or input errors, 3 numerical failures.

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "crm/crm.hpp"

namespace {

struct CommonOpts {
  double tol = 1e-9;
  unsigned long long seed = 0;
  std::string format = "pretty";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_seed = true) {
  cmd->add_option("--tol", opts.tol, "Global tolerance (scales all internal checks)")
      ->capture_default_str();
  if (with_seed)
    cmd->add_option("--seed", opts.seed, "Seed for every randomized step")
        ->capture_default_str();
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "pretty"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out, "Write the report to this path instead of stdout");
}

void emit(const CommonOpts& opts, const crm::Json& json, const std::string& pretty) {
  if (opts.format == "json") {
    if (opts.out.empty())
      std::cout << json.dump(2) << '\n';
    else
      crm::save_json(opts.out, json);
  } else {
    if (opts.out.empty()) {
      std::cout << pretty;
    } else {
      std::ofstream f(opts.out);
      if (!f) throw crm::ParseError("cannot open '" + opts.out + "' for writing");
      f << pretty;
    }
  }
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

std::string pretty_classify(const crm::ClassReport& r) {
  std::ostringstream os;
  os << "dims: (" << r.k << ", " << r.m << ")\n"
     << "psd: " << yesno(r.input_psd) << "  (min eigenvalue " << r.min_eigenvalue
     << ")\n"
     << "ppt: " << yesno(r.ppt) << "  (min eigenvalue of A^t2: " << r.min_eig_pt
     << ")\n";
  if (r.square) {
    os << "spc: " << yesno(r.spc) << "  (min eigenvalue of S(A^t2): " << r.spc_min_eig
       << ")\n"
       << "invariant under realignment: " << yesno(r.invariant_realign)
       << "  (||A - S(A)|| = " << r.invariance_residual << ")\n";
  } else {
    os << "spc / invariance: n/a (rectangular dims)\n";
  }
  return os.str();
}

std::string pretty_decompose(const crm::ReducibilityReport& r) {
  std::ostringstream os;
  if (r.indeterminate)
    os << "verdict: indeterminate (retry budget exhausted)\n";
  else
    os << "verdict: " << (r.completely_reducible ? "completely reducible"
                                                 : "NOT completely reducible")
       << "\n";
  os << "top eigenvalue multiplicity: " << r.multiplicity_top << "\n";
  if (r.completely_reducible) {
    os << "blocks: " << r.block_count()
       << "  (relative reconstruction residual " << r.residual_norm << ")\n";
    for (std::size_t i = 0; i < r.blocks.size(); ++i) {
      const crm::Block& b = r.blocks[i];
      os << "  block " << i << ": rank(V) = "
         << static_cast<long>(std::lround(std::real(b.V.trace())))
         << ", rank(W) = " << static_cast<long>(std::lround(std::real(b.W.trace())))
         << ", top eigenvalue = " << b.top_eigenvalue
         << (b.irreducible_certified ? ", irreducible" : "") << "\n";
    }
  }
  if (r.witness)
    os << "witness: split cross norm " << r.witness->cross_norm << "\n";
  return os.str();
}

std::string pretty_matrix(const crm::CMatrix& m) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const crm::Complex z = m(i, j);
      os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
      os << (j + 1 < m.cols() ? " " : "");
    }
    os << "\n";
  }
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Completely-reducible-map toolkit for bipartite operators"};
  app.require_subcommand(1);

  // classify ---------------------------------------------------------------
  CommonOpts cl_opts;
  std::string cl_file;
  CLI::App* cl = app.add_subcommand("classify", "PPT / SPC / realignment-invariance flags");
  cl->add_option("file", cl_file, "Matrix file")->required();
  add_common(cl, cl_opts, false);

  // decompose --------------------------------------------------------------
  CommonOpts de_opts;
  std::string de_file;
  CLI::App* de = app.add_subcommand("decompose",
                                    "Split into weakly irreducible blocks");
  de->add_option("file", de_file, "Matrix file")->required();
  add_common(de, de_opts);

  // schmidt ----------------------------------------------------------------
  CommonOpts sc_opts;
  std::string sc_file;
  bool sc_hermitian = false;
  CLI::App* sc = app.add_subcommand("schmidt", "Operator Schmidt decomposition");
  sc->add_option("file", sc_file, "Matrix file")->required();
  sc->add_flag("--hermitian", sc_hermitian, "Force Hermitian factors");
  add_common(sc, sc_opts, false);

  // sigma ------------------------------------------------------------------
  CLI::App* sg = app.add_subcommand("sigma", "The S4 action on M_k (x) M_k");
  sg->require_subcommand(1);
  CommonOpts sga_opts;
  std::string sga_perm, sga_file;
  CLI::App* sga = sg->add_subcommand("apply", "Apply L_sigma to a matrix file");
  sga->add_option("perm", sga_perm, "Permutation: cycles like (243) or images like 1423")
      ->required();
  sga->add_option("file", sga_file, "Matrix file")->required();
  add_common(sga, sga_opts, false);

  CommonOpts sgt_opts;
  long long sgt_k = 0;
  CLI::App* sgt = sg->add_subcommand("table", "Canonical composition of all 24 maps");
  sgt->add_option("k", sgt_k, "Local dimension")->required();
  add_common(sgt, sgt_opts, false);

  // mub --------------------------------------------------------------------
  CLI::App* mu = app.add_subcommand("mub", "Mutually unbiased bases");
  mu->require_subcommand(1);
  CommonOpts mg_opts;
  long long mg_p = 0;
  CLI::App* mg = mu->add_subcommand("generate", "p + 1 bases for prime p");
  mg->add_option("p", mg_p, "Prime dimension")->required();
  add_common(mg, mg_opts, false);

  CommonOpts mv_opts;
  std::string mv_file;
  CLI::App* mv = mu->add_subcommand("verify", "Check pairwise unbiasedness");
  mv->add_option("file", mv_file, "Basis file")->required();
  add_common(mv, mv_opts, false);

  CommonOpts mc_opts;
  std::string mc_file;
  CLI::App* mc = mu->add_subcommand("complete", "Find the last unbiased basis");
  mc->add_option("file", mc_file, "Basis file with exactly k bases")->required();
  add_common(mc, mc_opts);

  CLI11_PARSE(app, argc, argv);

  if (cl->parsed()) {
    const crm::Tolerances tols = crm::Tolerances::scaled(cl_opts.tol);
    const crm::ClassReport rep =
        crm::classify(crm::load_operator(cl_file), cl_opts.tol, tols);
    emit(cl_opts, crm::classify_report_to_json(rep), pretty_classify(rep));
    return 0;
  }

  if (de->parsed()) {
    const crm::Tolerances tols = crm::Tolerances::scaled(de_opts.tol);
    const crm::ReducibilityReport rep = crm::decompose(
        crm::load_operator(de_file), de_opts.tol, de_opts.seed, tols);
    emit(de_opts, crm::reducibility_report_to_json(rep), pretty_decompose(rep));
    if (rep.indeterminate) return 3;
    return rep.completely_reducible ? 0 : 1;
  }

  if (sc->parsed()) {
    const crm::Tolerances tols = crm::Tolerances::scaled(sc_opts.tol);
    const crm::BipartiteOperator a = crm::load_operator(sc_file);
    const crm::SchmidtDecomposition d = sc_hermitian
                                            ? crm::hermitian_schmidt_decompose(a, tols)
                                            : crm::schmidt_decompose(a, tols);
    std::ostringstream os;
    os << "rank: " << d.rank() << (d.hermitian_flag ? " (Hermitian factors)" : "")
       << "\ncoefficients:";
    for (double l : d.lambdas) os << ' ' << l;
    os << '\n';
    for (std::size_t i = 0; i < d.rank(); ++i)
      os << "gamma_" << i << " =\n" << pretty_matrix(d.gammas[i]) << "delta_" << i
         << " =\n" << pretty_matrix(d.deltas[i]);
    emit(sc_opts, crm::schmidt_to_json(d), os.str());
    return 0;
  }

  if (sga->parsed()) {
    const crm::Perm4 sigma = crm::Perm4::parse(sga_perm);
    const crm::BipartiteOperator out =
        crm::l_sigma(sigma, crm::load_operator(sga_file));
    emit(sga_opts, crm::operator_to_json(out),
         "L_" + sigma.cycle_notation() + "(A) =\n" + pretty_matrix(out.mat));
    return 0;
  }

  if (sgt->parsed()) {
    const auto table = crm::sigma_dictionary(static_cast<Eigen::Index>(sgt_k));
    std::ostringstream os;
    for (const crm::SigmaEntry& e : table)
      os << std::setw(10) << e.sigma.cycle_notation() << "  ->  " << e.formula << "\n";
    emit(sgt_opts, crm::sigma_table_to_json(table), os.str());
    return 0;
  }

  if (mg->parsed()) {
    const crm::MubSet ms = crm::generate_prime(mg_p);
    emit(mg_opts, crm::mubset_to_json(ms),
         std::to_string(ms.bases.size()) + " pairwise unbiased bases of C^" +
             std::to_string(ms.dim) + "\n");
    return 0;
  }

  if (mv->parsed()) {
    const crm::Tolerances tols = crm::Tolerances::scaled(mv_opts.tol);
    const crm::MubVerifyReport rep =
        crm::verify_set(crm::load_basis_set(mv_file), mv_opts.tol, tols);
    std::ostringstream os;
    os << "verdict: " << (rep.ok ? "all checks passed" : "FAILED") << "\n"
       << "non-orthonormal bases: " << rep.non_orthonormal.size() << "\n"
       << "failed pairs: " << rep.failed_pairs.size() << "\n";
    if (rep.resolution_checked)
      os << "resolution identity residual: " << rep.resolution_residual << "\n";
    emit(mv_opts, crm::mub_verify_to_json(rep), os.str());
    return rep.ok ? 0 : 1;
  }

  if (mc->parsed()) {
    const crm::Tolerances tols = crm::Tolerances::scaled(mc_opts.tol);
    const crm::MubSet ms = crm::load_basis_set(mc_file);
    const crm::Basis last = crm::complete(ms, mc_opts.tol, mc_opts.seed, tols);
    crm::MubSet out;
    out.dim = last.dim;
    out.bases.push_back(last);
    emit(mc_opts, crm::mubset_to_json(out),
         "completed basis (columns):\n" + pretty_matrix(last.vectors));
    return 0;
  }

  return 2;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const crm::Error& e) {
    if (e.kind == crm::Error::Kind::input) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
