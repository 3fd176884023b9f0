// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ncfr/gallery.hpp"
#include "ncfr/json_io.hpp"
#include "ncfr/kernels.hpp"
#include "ncfr/repsys.hpp"
#include "ncfr/soscert.hpp"

#ifndef NCFR_VERSION
#define NCFR_VERSION "0.0.0"
#endif
#ifndef NCFR_BUILD_HASH
#define NCFR_BUILD_HASH "unknown"
#endif

namespace ncfr::cli {

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNegative = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NCFR_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

struct CompleteArgs {
  std::string in, out;
  int steps = 1;
  double tol = 1e-9;
};

int run_complete(const CompleteArgs& args, std::ostream& out) {
  kernels::PartialKernel k = json_io::parse_kernel(json_io::read_file(args.in));
  auto psd = kernels::is_psd(kernels::assemble(k), args.tol);
  if (!psd.psd) {
    out << json_io::emit_error("input_not_psd", psd.min_eig);
    return kNegative;
  }
  kernels::PartialKernel ext = kernels::extend_steps(k, args.steps, args.tol);
  std::string text = json_io::emit_kernel(ext);
  if (!args.out.empty())
    json_io::write_file(args.out, text);
  else
    out << text;
  auto rep = kernels::is_psd(kernels::assemble(ext), args.tol);
  out << "{\"w_max_len\":" << ext.w_max().length()
      << ",\"min_eig\":" << json_io::format_double(rep.min_eig) << "}\n";
  return kOk;
}

struct FactorArgs {
  std::string in, out;
  int max_ydeg = 6;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

int run_factor(const FactorArgs& args, std::ostream& out) {
  soscert::NcPoly a = json_io::parse_poly(json_io::read_file(args.in));
  words::Word wbound = soscert::min_w_bound(a);
  int m = soscert::min_y_degree(a);
  soscert::CertifyOptions opts;
  opts.max_y_degree = std::max(m, args.max_ydeg);
  opts.solve.tol = args.tol;
  opts.solve.seed = args.seed;
  soscert::CertifyResult res = soscert::certify(a, wbound, m, opts);
  if (!res.certificate) {
    out << "{\"feasible\":false,\"levels\":[";
    for (size_t i = 0; i < res.levels.size(); ++i) {
      const auto& lv = res.levels[i];
      out << (i ? ",{" : "{") << "\"y_degree\":" << lv.m_prime
          << ",\"psd_residual\":" << json_io::format_double(lv.psd_residual)
          << ",\"affine_residual\":" << json_io::format_double(lv.affine_residual) << "}";
    }
    out << "]}\n";
    return kNegative;
  }
  std::string text = json_io::emit_certificate(*res.certificate);
  if (!args.out.empty())
    json_io::write_file(args.out, text);
  else
    out << text;
  out << "{\"feasible\":true,\"y_degree\":" << res.certificate->m_prime
      << ",\"residual\":" << json_io::format_double(res.certificate->residual) << "}\n";
  return kOk;
}

struct VerifyArgs {
  std::string poly, cert;
  double tol = 1e-7;
  double eval_tol = 1e-6;
  int trials = 50;
  int dim = 4;
  std::uint64_t seed = 0;
};

int run_verify(const VerifyArgs& args, std::ostream& out) {
  soscert::NcPoly a = json_io::parse_poly(json_io::read_file(args.poly));
  soscert::GramCertificate cert =
      json_io::parse_certificate(json_io::read_file(args.cert), a.spec);
  soscert::NcPoly b = soscert::certificate_factor(cert);
  soscert::NcPoly diff = soscert::subtract(a, soscert::convolve_adjoint(b));
  double symbolic = 0.0;
  for (const auto& [alpha, c] : diff.terms) symbolic = std::max(symbolic, linalg::max_abs(c));
  double sampled = 0.0;
  for (int t = 0; t < args.trials; ++t) {
    auto rep = repsys::sample_representation(
        a.spec, args.dim, repsys::derive_seed(args.seed, static_cast<std::uint64_t>(t)));
    sampled = std::max(sampled, linalg::herm_norm(repsys::evaluate(diff, rep)));
  }
  bool pass = symbolic <= args.tol && sampled <= args.eval_tol;
  out << "{\"symbolic_residual\":" << json_io::format_double(symbolic)
      << ",\"sampled_residual\":" << json_io::format_double(sampled)
      << ",\"pass\":" << (pass ? "true" : "false") << "}\n";
  return pass ? kOk : kNegative;
}

struct SampleArgs {
  std::string poly;
  int trials = 100;
  int dim = 4;
  std::uint64_t seed = 0;
};

int run_sample(const SampleArgs& args, std::ostream& out) {
  soscert::NcPoly a = json_io::parse_poly(json_io::read_file(args.poly));
  repsys::LowerBound lb = repsys::sampled_lower_bound(a, args.trials, args.dim, args.seed);
  out << json_io::emit_sample_result(lb.min_eig, lb.argmin_trial);
  return kOk;
}

int run_gallery(const std::string& which, const std::string& json_path, std::ostream& out,
                std::ostream& err) {
  if (which == "chsh") {
    soscert::GramCertificate cert = gallery::chsh_certificate();
    std::string text = json_io::emit_certificate(cert);
    if (!json_path.empty()) json_io::write_file(json_path, text);
    out << text;
    return kOk;
  }
  gallery::CounterexampleReport report;
  if (which == "z3z2")
    report = gallery::z3z2_counterexample();
  else if (which == "z3z3")
    report = gallery::z3z3_counterexample();
  else if (which == "toeplitz2")
    report = gallery::toeplitz2d_counterexample();
  else {
    err << "unknown gallery entry: " << which << "\n";
    return kError;
  }
  std::string text = json_io::emit_gallery_report(report);
  if (!json_path.empty()) json_io::write_file(json_path, text);
  out << text;
  std::string why;
  if (!gallery::regression_ok(report, &why)) {
    err << "gallery regression mismatch: " << why << "\n";
    return kError;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"noncommutative Fejer-Riesz factorization toolkit"};
  app.set_version_flag("--version", std::string("ncfr ") + NCFR_VERSION + " (" +
                                        NCFR_BUILD_HASH + ")");
  int threads = 0;
  app.add_option("--threads", threads,
                 "reserved; results are independent of its value")
      ->default_val(0);
  app.require_subcommand(1);

  CompleteArgs complete;
  CLI::App* cmd_complete = app.add_subcommand("complete", "extend a psd kernel along successors");
  cmd_complete->add_option("--in", complete.in, "kernel JSON input")->required();
  cmd_complete->add_option("--out", complete.out, "extended kernel JSON output");
  cmd_complete->add_option("--steps", complete.steps, "number of successor steps")
      ->default_val(1);
  cmd_complete->add_option("--tol", complete.tol, "psd tolerance")->default_val(1e-9);

  FactorArgs factor;
  factor.seed = default_seed();
  CLI::App* cmd_factor = app.add_subcommand("factor", "search for a Gram certificate A = B*B");
  cmd_factor->add_option("--in", factor.in, "polynomial JSON input")->required();
  cmd_factor->add_option("--out", factor.out, "certificate JSON output");
  cmd_factor->add_option("--max-ydeg", factor.max_ydeg, "Y-degree search cap")->default_val(6);
  cmd_factor->add_option("--tol", factor.tol, "solver tolerance")->default_val(1e-8);
  cmd_factor->add_option("--seed", factor.seed, "rng seed (NCFR_SEED overrides default)");

  VerifyArgs verify;
  verify.seed = default_seed();
  CLI::App* cmd_verify = app.add_subcommand("verify", "recheck a certificate against a polynomial");
  cmd_verify->add_option("--poly", verify.poly, "polynomial JSON")->required();
  cmd_verify->add_option("--cert", verify.cert, "certificate JSON")->required();
  cmd_verify->add_option("--tol", verify.tol, "symbolic residual bound")->default_val(1e-7);
  cmd_verify->add_option("--eval-tol", verify.eval_tol, "sampled residual bound")
      ->default_val(1e-6);
  cmd_verify->add_option("--trials", verify.trials, "sampled representations")->default_val(50);
  cmd_verify->add_option("--dim", verify.dim, "sampled representation dimension")->default_val(4);
  cmd_verify->add_option("--seed", verify.seed, "rng seed");

  SampleArgs sample;
  sample.seed = default_seed();
  CLI::App* cmd_sample = app.add_subcommand("sample", "sampled lower bound of a polynomial");
  cmd_sample->add_option("--poly", sample.poly, "polynomial JSON")->required();
  cmd_sample->add_option("--trials", sample.trials, "number of trials")->default_val(100);
  cmd_sample->add_option("--dim", sample.dim, "representation dimension")->default_val(4);
  cmd_sample->add_option("--seed", sample.seed, "rng seed");

  std::string gallery_name;
  std::string gallery_json;
  CLI::App* cmd_gallery = app.add_subcommand("gallery", "reproduce a packaged instance");
  cmd_gallery->add_option("name", gallery_name, "z3z2|z3z3|toeplitz2|chsh")->required();
  cmd_gallery->add_option("--json", gallery_json, "write the report/certificate to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (cmd_complete->parsed()) return run_complete(complete, out);
    if (cmd_factor->parsed()) return run_factor(factor, out);
    if (cmd_verify->parsed()) return run_verify(verify, out);
    if (cmd_sample->parsed()) return run_sample(sample, out);
    if (cmd_gallery->parsed()) return run_gallery(gallery_name, gallery_json, out, err);
  } catch (const json_io::SchemaError& e) {
    err << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  err << "no subcommand\n";
  return kError;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace ncfr::cli
