// oplab: classify operators, construct lambda-commuting pairs, certify
// lambda, and run the theorem suite. Exit codes: 0 = ran with no violated
// verdicts, 1 = violations found, 2 = usage or input error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oplab/classes.hpp"
#include "oplab/io.hpp"
#include "oplab/matrix_core.hpp"
#include "oplab/pairs.hpp"
#include "oplab/theorems.hpp"

namespace {

using namespace oplab;

struct TolFlags {
  double eq_tol = Tolerances{}.eq_tol;
  double psd_tol = Tolerances{}.psd_tol;
  double spec_tol = Tolerances{}.spec_tol;
  double margin_gate = Tolerances{}.margin_gate;

  Tolerances to_tolerances() const {
    if (eq_tol <= 0 || psd_tol <= 0 || spec_tol <= 0 || margin_gate < 1)
      throw Error("tolerances must be positive and margin gate >= 1");
    return Tolerances{eq_tol, psd_tol, spec_tol, margin_gate};
  }
};

void add_tol_flags(CLI::App* cmd, TolFlags& tf) {
  cmd->add_option("--eq-tol", tf.eq_tol, "relative identity-residual tolerance");
  cmd->add_option("--psd-tol", tf.psd_tol, "absolute PSD eigenvalue floor");
  cmd->add_option("--spec-tol", tf.spec_tol, "spectral-radius convergence tolerance");
  cmd->add_option("--margin-gate", tf.margin_gate, "violation gate multiplier");
}

Complex parse_complex(const std::string& text) {
  double re = 0.0, im = 0.0;
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      re = std::stod(text);
    } else {
      re = std::stod(text.substr(0, comma));
      im = std::stod(text.substr(comma + 1));
    }
  } catch (const std::exception&) {
    throw Error("cannot parse complex number '" + text + "' (expected re or re,im)");
  }
  return Complex(re, im);
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  const auto range = text.find("..");
  try {
    if (range != std::string::npos) {
      const int lo = std::stoi(text.substr(0, range));
      const int hi = std::stoi(text.substr(range + 2));
      if (lo < 1 || hi < lo) throw Error("bad dims range");
      for (int d = lo; d <= hi; ++d) dims.push_back(d);
    } else {
      size_t pos = 0;
      while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const auto piece = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        dims.push_back(std::stoi(piece));
        if (dims.back() < 1) throw Error("bad dim");
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("cannot parse dims '" + text + "' (expected lo..hi or a comma list)");
  }
  if (dims.empty()) throw Error("dims list is empty");
  return dims;
}

// family spec: name[:args], e.g. clock_shift:4, direct_sum:2,2
PairRecipe parse_family(const std::string& spec, std::uint64_t seed, Complex alpha, Complex beta) {
  PairRecipe recipe;
  recipe.seed = seed;
  recipe.alpha = alpha;
  recipe.beta = beta;
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto family = pair_family_from_string(name);
  if (!family) throw Error("unknown pair family '" + name + "'");
  recipe.family = *family;
  try {
    if (recipe.family == PairFamily::direct_sum) {
      size_t pos = 0;
      while (pos < args.size()) {
        const auto comma = args.find(',', pos);
        recipe.components.push_back(
            std::stoi(args.substr(pos, comma == std::string::npos ? comma : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else if (!args.empty()) {
      recipe.dim = std::stoi(args);
    }
  } catch (const std::exception&) {
    throw Error("cannot parse family arguments in '" + spec + "'");
  }
  return recipe;
}

void print_class_table(const ClassReport& report) {
  std::printf("dim %d  op_norm %.6g\n", report.dim, report.op_norm);
  std::printf("%-24s %-13s %-14s %s\n", "class", "verdict", "margin", "details");
  for (const auto& e : report.entries) {
    std::string details = e.method;
    if (e.params.p) details += " p=" + std::to_string(*e.params.p);
    if (e.params.k) details += " k=" + std::to_string(*e.params.k);
    if (e.params.M) details += " M=" + fmt17(*e.params.M);
    if (!e.note.empty()) details += " (" + e.note + ")";
    std::printf("%-24s %-13s %-14.4g %s\n", e.class_id.c_str(),
                std::string(to_string(e.verdict)).c_str(), e.margin, details.c_str());
  }
}

void print_verdict_table(const TheoremVerdict& v) {
  std::printf("%-22s %-10s conclusion %-14.4g digest %s\n", v.theorem_id.c_str(),
              std::string(to_string(v.status)).c_str(), v.conclusion_margin,
              v.inputs_digest.c_str());
  for (const auto& [name, margin] : v.premise_margins)
    std::printf("    premise %-28s %.4g\n", name.c_str(), margin);
  if (!v.notes.empty()) std::printf("    notes: %s\n", v.notes.c_str());
}

struct VerifyInputs {
  std::optional<Matrix> a;
  std::optional<Matrix> b;
  std::optional<Matrix> basis;
  std::optional<Pair> pair;
};

// restriction instance used when only a family/dim is given: a direct sum of
// two rotated positive diagonals, invariant under the leading coordinates
std::pair<Matrix, Matrix> family_restriction_instance(int dim, std::uint64_t seed) {
  const int half = std::max(dim / 2, 1);
  const auto rotated = [&](std::uint64_t salt) {
    Matrix d = Matrix::Zero(half, half);
    for (int i = 0; i < half; ++i) d(i, i) = Complex(0.5 + double((i * 7 + salt) % 5), 0.0);
    const Matrix u = random_unitary(half, seed + salt);
    return Matrix(u.adjoint() * d * u);
  };
  Matrix block = Matrix::Zero(2 * half, 2 * half);
  block.topLeftCorner(half, half) = rotated(1);
  block.bottomRightCorner(half, half) = rotated(2);
  return {block, Matrix::Identity(2 * half, half)};
}

int run_verify(const std::string& theorem, bool all, const VerifyInputs& inputs, int k, int k_max,
               bool json, std::uint64_t seed, const Tolerances& tol) {
  std::vector<std::string> selected;
  if (all) {
    selected = theorem_ids();
  } else {
    const auto& ids = theorem_ids();
    if (std::find(ids.begin(), ids.end(), theorem) == ids.end())
      throw UnknownTheoremError("unknown theorem '" + theorem + "'");
    selected = {theorem};
  }

  const Matrix* A = nullptr;
  const Matrix* B = nullptr;
  if (inputs.pair) {
    A = &inputs.pair->a;
    B = &inputs.pair->b;
  } else {
    if (inputs.a) A = &*inputs.a;
    if (inputs.b) B = &*inputs.b;
  }

  std::vector<TheoremVerdict> verdicts;
  std::vector<std::pair<std::string, std::string>> skipped;
  for (const auto& id : selected) {
    if (id == "normaloid") {
      const Matrix* T = A;
      if (inputs.pair) T = &inputs.pair->b;
      if (!T) {
        skipped.emplace_back(id, "inputs missing");
        continue;
      }
      verdicts.push_back(verify_normaloid_lemma(*T, std::max(k_max, 3), tol));
      continue;
    }
    if (id == "restriction") {
      if (inputs.basis && A) {
        verdicts.push_back(verify_restriction_lemma(*A, *inputs.basis, tol));
      } else if (inputs.pair) {
        const auto [T, basis] = family_restriction_instance(int(inputs.pair->a.rows()), seed);
        verdicts.push_back(verify_restriction_lemma(T, basis, tol));
      } else {
        skipped.emplace_back(id, "inputs missing");
      }
      continue;
    }
    if (!A || !B) {
      if (all) {
        skipped.emplace_back(id, "inputs missing");
        continue;
      }
      throw Error("theorem '" + id + "' needs two operators (--a/--b or --family)");
    }
    if (id == "power_identity" || id == "fuglede_putnam") {
      // these two require a valid certificate; under --all a pair that is
      // not lambda-commuting just skips them instead of aborting
      const CommutationCertificate cert =
          inputs.pair ? inputs.pair->certificate : certify_pair(*A, *B, tol);
      if (!cert.valid(tol)) {
        if (all) {
          skipped.emplace_back(id, "pair is not lambda-commuting");
          continue;
        }
        throw NotLambdaCommutingError("theorem '" + id +
                                      "' needs a lambda-commuting pair, residual " +
                                      fmt17(cert.residual));
      }
      verdicts.push_back(id == "power_identity" ? verify_power_identity(*A, *B, cert, k_max, tol)
                                                : verify_fuglede_putnam(*A, *B, cert, tol));
    } else if (id == "modulus") {
      verdicts.push_back(verify_modulus_theorem(*A, *B, tol));
    } else if (id == "quasinormal_product") {
      verdicts.push_back(verify_quasinormal_product(*A, *B, tol));
    } else if (id == "binormal_product") {
      verdicts.push_back(verify_binormal_product(*A, *B, tol));
    } else if (id == "k_hyponormal_product") {
      verdicts.push_back(verify_k_hyponormal_product(*A, *B, k, tol));
    } else if (id == "lambda_bounds") {
      verdicts.push_back(verify_lambda_bounds(*A, *B, tol));
    } else if (id == "m_product") {
      verdicts.push_back(verify_M_product_theorem(*A, *B, tol));
    }
  }

  if (json) {
    std::string results = "[";
    for (size_t i = 0; i < verdicts.size(); ++i) {
      if (i) results += ",";
      results += theorem_verdict_to_json(verdicts[i]);
    }
    results += "]";
    std::fputs(report_document(tol, seed, results).c_str(), stdout);
  } else {
    for (const auto& v : verdicts) print_verdict_table(v);
    for (const auto& [id, why] : skipped)
      std::printf("%-22s skipped (%s)\n", id.c_str(), why.c_str());
  }
  for (const auto& v : verdicts)
    if (v.status == TheoremStatus::violated) return 1;
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"verification laboratory for lambda-commuting operator pairs"};
  app.require_subcommand(1);

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "classify an operator from a MatrixFile");
  std::string classify_path;
  bool classify_json = false, classify_table = false, skip_k_hyp = false;
  double opt_p = 0.5;
  int opt_k = 2;
  std::uint64_t classify_seed = 1;
  TolFlags classify_tol;
  classify_cmd->add_option("path", classify_path, "MatrixFile JSON")->required();
  classify_cmd->add_flag("--json", classify_json, "machine-readable report");
  classify_cmd->add_flag("--table", classify_table, "human-readable table (default)");
  classify_cmd->add_option("--p", opt_p, "exponent for the p-classes (0 < p <= 1)");
  classify_cmd->add_option("--k", opt_k, "exponent for the k-hyponormal entry (>= 2)");
  classify_cmd->add_flag("--no-k-hyponormal", skip_k_hyp, "skip the sphere-search entry");
  classify_cmd->add_option("--seed", classify_seed, "sphere-search seed");
  add_tol_flags(classify_cmd, classify_tol);

  // pair
  auto* pair_cmd = app.add_subcommand("pair", "construct a lambda-commuting pair");
  std::string pair_family_name, pair_of, pair_out, alpha_text = "1", beta_text = "1";
  int pair_dim = 2;
  std::uint64_t pair_seed = 1;
  pair_cmd->add_option("family", pair_family_name, "clock_shift|scaled|direct_sum|diagonal_commuting")
      ->required();
  pair_cmd->add_option("--dim", pair_dim, "dimension");
  pair_cmd->add_option("--seed", pair_seed, "generator seed");
  pair_cmd->add_option("--of", pair_of, "composition spec, e.g. clock_shift:2,clock_shift:2");
  pair_cmd->add_option("--alpha", alpha_text, "scale for A as re[,im]");
  pair_cmd->add_option("--beta", beta_text, "scale for B as re[,im]");
  pair_cmd->add_option("--out", pair_out, "output directory")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run one theorem (or all) on an instance");
  std::string verify_theorem, verify_a, verify_b, verify_basis, verify_family;
  bool verify_all = false, verify_json = false;
  int verify_k = 2, verify_kmax = 6;
  std::uint64_t verify_seed = 1;
  TolFlags verify_tol;
  verify_cmd->add_option("--theorem", verify_theorem, "theorem id");
  verify_cmd->add_flag("--all", verify_all, "run every theorem");
  verify_cmd->add_option("--a", verify_a, "MatrixFile for A (or T)");
  verify_cmd->add_option("--b", verify_b, "MatrixFile for B");
  verify_cmd->add_option("--basis", verify_basis, "BasisFile for the restriction lemma");
  verify_cmd->add_option("--family", verify_family, "constructed family, e.g. clock_shift:4");
  verify_cmd->add_option("--k", verify_k, "k for the k-hyponormal product theorem");
  verify_cmd->add_option("--kmax", verify_kmax, "largest power for the power identity");
  verify_cmd->add_flag("--json", verify_json, "machine-readable report");
  verify_cmd->add_option("--seed", verify_seed, "seed for family construction");
  add_tol_flags(verify_cmd, verify_tol);

  // suite
  auto* suite_cmd = app.add_subcommand("suite", "run the full theorem suite");
  std::string suite_dims = "2..8", suite_report_path;
  int suite_trials = 200;
  std::uint64_t suite_seed = 42;
  TolFlags suite_tol;
  suite_cmd->add_option("--dims", suite_dims, "dimensions, lo..hi or a comma list");
  suite_cmd->add_option("--trials", suite_trials, "instances per theorem");
  suite_cmd->add_option("--seed", suite_seed, "suite seed");
  suite_cmd->add_option("--report", suite_report_path, "write the ReportDocument here");
  add_tol_flags(suite_cmd, suite_tol);

  // search
  auto* search_cmd = app.add_subcommand("search", "stress-search one theorem for violations");
  std::string search_theorem, search_report_path;
  int search_trials = 200;
  std::uint64_t search_seed = 7;
  TolFlags search_tol;
  search_cmd->add_option("--theorem", search_theorem, "theorem id")->required();
  search_cmd->add_option("--trials", search_trials, "number of instances");
  search_cmd->add_option("--seed", search_seed, "search seed");
  search_cmd->add_option("--report", search_report_path, "write the ReportDocument here");
  add_tol_flags(search_cmd, search_tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (classify_cmd->parsed()) {
    const Tolerances tol = classify_tol.to_tolerances();
    if (opt_p <= 0.0 || opt_p > 1.0) throw Error("--p must lie in (0, 1]");
    if (opt_k < 2) throw Error("--k must be >= 2");
    const Matrix T = matrix_from_file(classify_path);
    ClassifyOptions opts;
    opts.p = opt_p;
    opts.k = opt_k;
    opts.k_hyponormal = !skip_k_hyp;
    opts.sphere_seed = classify_seed;
    const ClassReport report = classify(T, tol, opts);
    if (classify_json && !classify_table)
      std::fputs(report_document(tol, classify_seed, "[" + class_report_to_json(report) + "]").c_str(),
                 stdout);
    else
      print_class_table(report);
    return 0;
  }

  if (pair_cmd->parsed()) {
    const std::string spec =
        pair_family_name == "scaled" && !pair_of.empty() ? pair_of : pair_family_name;
    PairRecipe recipe;
    if (pair_family_name == "direct_sum") {
      recipe.seed = pair_seed;
      // composition pieces are clock_shift:<dim> entries
      size_t pos = 0;
      while (pos < pair_of.size()) {
        const auto comma = pair_of.find(',', pos);
        const std::string piece =
            pair_of.substr(pos, comma == std::string::npos ? comma : comma - pos);
        const auto colon = piece.find(':');
        const std::string name = piece.substr(0, colon);
        if (name != "clock_shift" || colon == std::string::npos)
          throw Error("direct_sum composition must list clock_shift:<dim> pieces");
        try {
          recipe.components.push_back(std::stoi(piece.substr(colon + 1)));
        } catch (const std::exception&) {
          throw Error("cannot parse composition piece '" + piece + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (recipe.components.empty()) throw Error("direct_sum needs --of clock_shift:<dim>,...");
      recipe.family = PairFamily::direct_sum;
    } else {
      recipe = parse_family(spec, pair_seed, parse_complex(alpha_text), parse_complex(beta_text));
      if (pair_family_name == "scaled") recipe.family = PairFamily::scaled;
      if (pair_of.empty()) recipe.dim = pair_dim;
    }
    const Pair pair = make_instance(recipe);
    write_file(pair_out + "/A.json", matrix_to_json(pair.a) + "\n");
    write_file(pair_out + "/B.json", matrix_to_json(pair.b) + "\n");
    write_file(pair_out + "/certificate.json", certificate_to_json(pair.certificate) + "\n");
    std::printf("wrote %s/{A,B,certificate}.json  lambda=%s+%si residual=%s\n", pair_out.c_str(),
                fmt17(pair.certificate.lambda.real()).c_str(),
                fmt17(pair.certificate.lambda.imag()).c_str(),
                fmt17(pair.certificate.residual).c_str());
    return 0;
  }

  if (verify_cmd->parsed()) {
    const Tolerances tol = verify_tol.to_tolerances();
    if (!verify_all && verify_theorem.empty())
      throw Error("verify needs --theorem <id> or --all");
    VerifyInputs inputs;
    if (!verify_family.empty()) {
      inputs.pair = make_instance(parse_family(verify_family, verify_seed, Complex(2.0, 0.0),
                                               Complex(0.0, 1.0)),
                                  tol);
    } else {
      if (!verify_a.empty()) inputs.a = matrix_from_file(verify_a);
      if (!verify_b.empty()) inputs.b = matrix_from_file(verify_b);
      if (!verify_basis.empty()) inputs.basis = basis_from_file(verify_basis);
      if (!inputs.a) throw Error("verify needs --family or --a (with --b for pair theorems)");
    }
    return run_verify(verify_theorem, verify_all, inputs, verify_k, verify_kmax, verify_json,
                      verify_seed, tol);
  }

  if (suite_cmd->parsed()) {
    SuiteConfig config;
    config.dims = parse_dims(suite_dims);
    config.trials = suite_trials;
    config.seed = suite_seed;
    config.tol = suite_tol.to_tolerances();
    const SuiteReport report = run_suite(config);
    const std::string doc =
        report_document(config.tol, config.seed, "[" + suite_report_to_json(report) + "]");
    if (!suite_report_path.empty())
      write_file(suite_report_path, doc);
    else
      std::fputs(doc.c_str(), stdout);
    for (const auto& [id, tally] : report.per_theorem)
      std::fprintf(stderr, "%-22s confirmed %-5d vacuous %-5d violated %d\n", id.c_str(),
                   tally.confirmed, tally.vacuous, tally.violated);
    return report.passed() ? 0 : 1;
  }

  if (search_cmd->parsed()) {
    const Tolerances tol = search_tol.to_tolerances();
    const SuiteReport report =
        counterexample_search(search_theorem, search_trials, search_seed, tol);
    const std::string doc =
        report_document(tol, search_seed, "[" + suite_report_to_json(report) + "]");
    if (!search_report_path.empty())
      write_file(search_report_path, doc);
    else
      std::fputs(doc.c_str(), stdout);
    const auto& tally = report.tally(search_theorem);
    std::fprintf(stderr, "%s: confirmed %d vacuous %d violated %d worst margin %s\n",
                 search_theorem.c_str(), tally.confirmed, tally.vacuous, tally.violated,
                 tally.worst_trial >= 0 ? fmt17(tally.worst_conclusion_margin).c_str() : "n/a");
    return report.passed() ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const oplab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
