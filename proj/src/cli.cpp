#include "pfw/cli.hpp"

#include <algorithm>
#include <filesystem>

#include <CLI11.hpp>

#include "pfw/errors.hpp"
#include "pfw/filter.hpp"
#include "pfw/wavelet.hpp"

namespace pfw {

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kQmfTol = 1e-8;
constexpr double kTelescopeTol = 1e-8;

using io::Json;

struct Inputs {
  std::string matrix, partition, mask, support, out, input, mask_out;
  double tol = 1e-10;
  double eps = 1e-6;
  int restarts = 64;
  std::uint64_t seed = 1;
  int iters = -1;
  int level = -1;
  int samples = 1000;
};

PartitionData load_partition(const Inputs& in, std::ostream& err) {
  if (!in.partition.empty()) return io::partition_from_json(io::read_json_file(in.partition));
  if (in.matrix.empty()) throw PreconditionError("need --partition or --matrix");
  const IntMatrix a0 = io::matrix_from_json(io::read_json_file(in.matrix));
  PartitionData pd = reduce(a0);
  if (classify_expansive(a0) != Expansiveness::Expansive)
    err << "warning: the matrix is not expansive\n";
  return pd;
}

void emit(const Inputs& in, const Json& j, const std::string& summary, std::ostream& out,
          std::ostream& err) {
  if (in.out.empty()) {
    out << io::dump(j);
    err << summary << '\n';
  } else {
    io::write_text_file(in.out, io::dump(j));
    out << summary << '\n';
  }
}

Json diffs_json(const std::vector<double>& diffs) {
  Json a = Json::array();
  for (double d : diffs) a.push_back(d);
  return a;
}

int cmd_reduce(const Inputs& in, std::ostream& out, std::ostream& err) {
  // with --partition the given tuple is verified as is
  const PartitionData pd = load_partition(in, err);
  const PartitionReport rep = verify_partition(pd, 3);
  if (!rep.pass) {
    err << io::dump(io::to_json(rep));
    return kExitInvariant;
  }
  emit(in, io::to_json(pd), "partition: pass (radius 3, 0 violations)", out, err);
  return kExitOk;
}

int cmd_solve(const Inputs& in, std::ostream& out, std::ostream& err) {
  if (in.support.empty()) throw PreconditionError("solve needs --support");
  const PartitionData pd = load_partition(in, err);
  const auto support = io::parse_support(in.support);
  if (static_cast<Eigen::Index>(support.front().size()) != pd.dim())
    throw PreconditionError("support dimension does not match the matrix");
  SolveConfig cfg;
  cfg.tol = in.tol;
  cfg.restarts = in.restarts;
  cfg.seed = in.seed;
  const auto masks = solve(build_system(support, pd), cfg);
  if (masks.empty()) {
    err << "no solution within tolerance " << in.tol << " from " << in.restarts << " starts\n";
    return kExitNoSolution;
  }
  Json arr = Json::array();
  for (const auto& m : masks) arr.push_back(io::to_json(m));
  emit(in, Json{{"masks", arr}}, "solutions: " + std::to_string(masks.size()), out, err);
  return kExitOk;
}

Mask load_mask(const Inputs& in) {
  if (in.mask.empty()) throw PreconditionError("need --mask");
  return io::mask_from_json(io::read_json_file(in.mask));
}

int cmd_cascade(const Inputs& in, std::ostream& out, std::ostream& err) {
  const Mask mask = load_mask(in);
  const int iters = in.iters < 0 ? 8 : in.iters;
  IterateResult res;
  if (!in.partition.empty()) {
    // mask solved against A; report phi over the original matrix A0
    const PartitionData pd = io::partition_from_json(io::read_json_file(in.partition));
    res = iterate(mask, init_conjugated_indicator(pd), iters, in.eps);
    if (in.level >= 0) res.phi = refine(res.phi, std::max(in.level, res.phi.level));
    res.phi = conjugate_to_original(res.phi, pd);
  } else {
    if (in.matrix.empty()) throw PreconditionError("cascade needs --partition or --matrix");
    const IntMatrix a = io::matrix_from_json(io::read_json_file(in.matrix));
    if (a.rows() != mask.dim) throw PreconditionError("mask dimension does not match the matrix");
    res = iterate(mask, a, iters, in.eps);
    if (in.level >= 0) res.phi = refine(res.phi, std::max(in.level, res.phi.level));
  }
  std::string summary = "cascade: " + std::to_string(res.diffs.size()) + " steps, " +
                        (res.converged ? "converged" : "not converged") + ", diffs " +
                        diffs_json(res.diffs).dump();
  emit(in, io::to_json(res.phi), summary, out, err);
  return kExitOk;
}

int cmd_wavelet(const Inputs& in, std::ostream& out, std::ostream& err) {
  if (in.partition.empty()) throw PreconditionError("wavelet needs --partition");
  const PartitionData pd = io::partition_from_json(io::read_json_file(in.partition));
  const Mask mask = load_mask(in);
  const int iters = in.iters < 0 ? 8 : in.iters;
  const IterateResult res = iterate(mask, init_conjugated_indicator(pd), iters, 0);
  const SampledFunction psi = conjugate_to_original(build_wavelet(res.phi, mask, pd), pd);
  if (!in.mask_out.empty()) io::write_text_file(in.mask_out, io::dump(io::to_json(wavelet_mask(mask, pd))));
  emit(in, io::to_json(psi),
       "wavelet: stage " + std::to_string(res.phi.level) + ", " + std::to_string(psi.values.size()) +
           " cells, norm " + io::format_coeff(l2_norm(psi)),
       out, err);
  return kExitOk;
}

Json filter_report(Mask mask, const PartitionData& pd, double tol, int samples, std::uint64_t seed,
                   bool& pass) {
  const VerifyResult v = verify(mask, pd, tol);
  const QmfReport q = check_qmf(mask, pd, samples, seed);
  Json j;
  j["lawton"] = Json{{"pass", v.pass}, {"max_residual", v.max_residual}, {"tol", tol}};
  j["qmf"] = io::to_json(q);
  if (classify_expansive(pd.a) == Expansiveness::Expansive)
    j["support_bound"] = io::to_json(support_bound(mask, pd.a));
  pass = v.pass && q.max_dev < kQmfTol;
  j["pass"] = pass;
  return j;
}

int cmd_verify_filter(const Inputs& in, std::ostream& out, std::ostream& err) {
  const PartitionData pd = load_partition(in, err);
  bool pass = false;
  const Json rep = filter_report(load_mask(in), pd, in.tol, in.samples, in.seed, pass);
  emit(in, rep, std::string("filter: ") + (pass ? "pass" : "FAIL"), out, err);
  return pass ? kExitOk : kExitInvariant;
}

bool frame_pass(const FrameReport& r) {
  bool ok = true;
  for (const auto& t : r.telescope)
    ok = ok && t.residual <= kTelescopeTol && std::abs(t.energy_residual) <= kTelescopeTol;
  for (const auto& p : r.parseval_partial) ok = ok && p.value <= r.f_norm_sq * (1 + 1e-6) + 1e-9;
  return ok;
}

int cmd_verify_frame(const Inputs& in, std::ostream& out, std::ostream& err) {
  const PartitionData pd = load_partition(in, err);
  const FrameReport r =
      frame_report(load_mask(in), pd, in.iters < 0 ? 3 : in.iters, in.seed, in.level < 0 ? 4 : in.level);
  const bool pass = frame_pass(r);
  emit(in, io::to_json(r), std::string("frame: ") + (pass ? "pass" : "FAIL"), out, err);
  return pass ? kExitOk : kExitInvariant;
}

int cmd_pipeline(const Inputs& in, std::ostream& out, std::ostream& err) {
  if (in.out.empty()) throw PreconditionError("pipeline needs --out <directory>");
  const PartitionData pd = load_partition(in, err);
  PipelineConfig cfg;
  if (!in.mask.empty())
    cfg.masks = io::masks_from_json(io::read_json_file(in.mask));
  else if (!in.support.empty())
    cfg.support = io::parse_support(in.support);
  else
    throw PreconditionError("pipeline needs --support or --mask");
  cfg.solve.tol = in.tol;
  cfg.solve.restarts = in.restarts;
  cfg.solve.seed = in.seed;
  if (in.iters >= 0) cfg.iters = in.iters;
  cfg.out_dir = in.out;
  const Json rep = run_pipeline(pd, cfg);
  if (rep.contains("error") && rep["error"] == "no solution") {
    err << "no solution\n";
    return kExitNoSolution;
  }
  const bool pass = rep["all_pass"].get<bool>();
  out << "pipeline: " << (pass ? "all pass" : "FAIL") << ", report in "
      << (std::filesystem::path(in.out) / "report.json").string() << '\n';
  return pass ? kExitOk : kExitInvariant;
}

int cmd_export(const Inputs& in, std::ostream& out, std::ostream& err) {
  if (in.input.empty()) throw PreconditionError("export needs an input file");
  const Json j = io::read_json_file(in.input);
  std::string csv;
  if (j.contains("cells")) {
    csv = io::to_csv(io::function_from_json(j));
  } else if (j.contains("lj_curve")) {
    std::map<int, double> curve;
    for (const Json& e : j.at("lj_curve")) curve[e.at("J").get<int>()] = e.at("L").get<double>();
    csv = io::lj_csv(curve);
    if (j.contains("parseval_partial")) {
      std::vector<PartialSum> sums;
      for (const Json& e : j.at("parseval_partial")) {
        PartialSum p;
        p.n_lo = e.at("n_lo").get<int>();
        p.n_hi = e.at("n_hi").get<int>();
        p.value = e.at("value").get<double>();
        sums.push_back(p);
      }
      csv += io::partial_csv(sums);
    }
  } else {
    throw ParseError("export understands sampled functions and frame reports");
  }
  if (in.out.empty())
    out << csv;
  else
    io::write_text_file(in.out, csv);
  (void)err;
  return kExitOk;
}

}  // namespace

FrameReport frame_report(const Mask& mask, const PartitionData& pd, int stage, std::uint64_t seed,
                         int f_level) {
  if (stage < 0) throw PreconditionError("negative stage");
  FrameReport r;
  const IterateResult res = iterate(mask, pd.a, stage, 0);
  const SampledFunction& phi = res.phi;
  const SampledFunction phi_next = cascade_step(phi, mask);
  const SampledFunction psi = build_wavelet(phi, mask, pd);
  if (!res.diffs.empty()) r.stage_diff = res.diffs.back();
  Mask copy = mask;
  r.lawton_residual = verify(copy, pd, 1.0).max_residual;

  const SampledFunction f = random_function(pd.a, f_level, seed);
  for (int J : {0, 1}) r.telescope.push_back(telescope_check(f, phi, phi_next, psi, J));

  const SampledFunction chi = init_indicator(pd.a);
  r.f_norm_sq = l2_norm_sq(chi);
  r.lj_curve = lj_curve(chi, phi, -8, 5);
  std::map<int, double> per_scale;
  for (int n = -8; n <= 5; ++n) per_scale[n] = parseval_partial_sum(chi, psi, n, n).value;
  for (int w = 0; w <= 8; ++w) {
    PartialSum p;
    p.n_lo = -w;
    p.n_hi = std::min(w, 5);
    for (int n = p.n_lo; n <= p.n_hi; ++n) p.value += per_scale[n];
    r.parseval_partial.push_back(p);
  }
  return r;
}

io::Json run_pipeline(const PartitionData& pd, const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    io::write_text_file((dir / name).string(), text);
  };

  Json rep;
  rep["tool"] = "pfw";
  rep["version"] = kVersion;
  rep["seed"] = cfg.solve.seed;
  rep["tol"] = cfg.solve.tol;
  rep["iters"] = cfg.iters;

  const PartitionReport prep = verify_partition(pd, 3);
  rep["partition"] = io::to_json(prep);
  write("partition.json", io::dump(io::to_json(pd)));
  if (!prep.pass) throw InvariantError("partition data fails verification");

  std::vector<Mask> masks = cfg.masks;
  bool solved = false;
  if (cfg.support) {
    auto all = solve(build_system(*cfg.support, pd), cfg.solve);
    Json arr = Json::array();
    for (const auto& m : all) arr.push_back(io::to_json(m));
    write("masks.json", io::dump(Json{{"masks", arr}}));
    rep["solutions"] = all.size();
    if (all.empty()) {
      rep["error"] = "no solution";
      write("report.json", io::dump(rep));
      return rep;
    }
    masks = {all.front()};
    solved = true;
  }
  if (!solved) {
    Json arr = Json::array();
    for (const auto& m : masks) arr.push_back(io::to_json(m));
    write("masks.json", io::dump(Json{{"masks", arr}}));
  }

  bool all_pass = prep.pass;
  Json results = Json::array();
  for (std::size_t i = 0; i < masks.size(); ++i) {
    Mask mask = masks[i];
    if (mask.dim != pd.dim()) throw PreconditionError("mask dimension does not match the partition");
    const std::string tag = std::to_string(i);
    Json r;
    r["index"] = i;
    bool filter_ok = false;
    r["filter"] = filter_report(mask, pd, cfg.solve.tol, 1000, cfg.solve.seed, filter_ok);
    verify(mask, pd, cfg.solve.tol);

    const IterateResult res = iterate(mask, init_conjugated_indicator(pd), cfg.iters, 0);
    const SampledFunction phi_next = cascade_step(res.phi, mask);
    const SampledFunction psi = build_wavelet(res.phi, mask, pd);
    const SampledFunction phi0 = conjugate_to_original(res.phi, pd);
    const SampledFunction psi0 = conjugate_to_original(psi, pd);
    r["cascade"] = Json{{"stage", res.phi.level},
                        {"diffs", diffs_json(res.diffs)},
                        {"converged", res.converged},
                        {"norm", l2_norm(phi0)},
                        {"two_scale_residual", two_scale_residual(res.phi, phi_next, mask)}};
    r["wavelet"] = Json{{"cells", psi0.values.size()}, {"norm", l2_norm(psi0)}};

    const int stage = std::min(cfg.iters, cfg.frame_stage);
    const FrameReport fr = frame_report(mask, pd, stage, cfg.solve.seed);
    const bool frame_ok = frame_pass(fr);
    Json frj = io::to_json(fr);
    frj["stage"] = stage;
    r["frame"] = std::move(frj);
    r["pass"] = filter_ok && frame_ok;
    all_pass = all_pass && filter_ok && frame_ok;

    write("mask_" + tag + ".json", io::dump(io::to_json(mask)));
    write("wavelet_mask_" + tag + ".json", io::dump(io::to_json(wavelet_mask(mask, pd))));
    write("phi_" + tag + ".json", io::dump(io::to_json(phi0)));
    write("phi_" + tag + ".csv", io::to_csv(phi0));
    write("psi_" + tag + ".json", io::dump(io::to_json(psi0)));
    write("psi_" + tag + ".csv", io::to_csv(psi0));
    write("lj_" + tag + ".csv", io::lj_csv(fr.lj_curve));
    write("partial_" + tag + ".csv", io::partial_csv(fr.parseval_partial));
    results.push_back(std::move(r));
  }
  rep["masks"] = std::move(results);
  rep["all_pass"] = all_pass;
  write("report.json", io::dump(rep));
  return rep;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parseval frame wavelets for integer dilations with determinant +-2", "pfw"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Inputs in;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--matrix", in.matrix, "integer matrix JSON");
    c->add_option("--partition", in.partition, "partition JSON");
    c->add_option("--out", in.out, "output file (directory for pipeline)");
  };
  auto* reduce_cmd = app.add_subcommand("reduce", "reduce a |det| = 2 matrix and verify the partition");
  add_common(reduce_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "solve the Lawton system on a box support");
  add_common(solve_cmd);
  solve_cmd->add_option("--support", in.support, "box support, e.g. 0..3,0..1,0..1");
  solve_cmd->add_option("--tol", in.tol, "residual tolerance");
  solve_cmd->add_option("--restarts", in.restarts, "random starts")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", in.seed, "random seed");

  auto* cascade_cmd = app.add_subcommand("cascade", "iterate the cascade operator from the unit cube");
  add_common(cascade_cmd);
  cascade_cmd->add_option("--mask", in.mask, "mask JSON");
  cascade_cmd->add_option("--iters", in.iters, "maximum steps (default 8)")->check(CLI::NonNegativeNumber);
  cascade_cmd->add_option("--tol", in.eps, "early-stop threshold on diffs (0 disables)");
  cascade_cmd->add_option("--level", in.level, "sample the result on this level");

  auto* wavelet_cmd = app.add_subcommand("wavelet", "build psi at a cascade stage, over A0");
  add_common(wavelet_cmd);
  wavelet_cmd->add_option("--mask", in.mask, "scaling mask JSON");
  wavelet_cmd->add_option("--iters", in.iters, "cascade stage (default 8)")->check(CLI::NonNegativeNumber);
  wavelet_cmd->add_option("--mask-out", in.mask_out, "write the wavelet mask here");

  auto* vf_cmd = app.add_subcommand("verify-filter", "Lawton residual, QMF identity and support bound");
  add_common(vf_cmd);
  vf_cmd->add_option("--mask", in.mask, "mask JSON");
  vf_cmd->add_option("--tol", in.tol, "Lawton residual tolerance");
  vf_cmd->add_option("--seed", in.seed, "QMF sample seed");
  vf_cmd->add_option("--samples", in.samples, "QMF samples")->check(CLI::PositiveNumber);

  auto* vfr_cmd = app.add_subcommand("verify-frame", "telescoping, L_J and Parseval partial sums");
  add_common(vfr_cmd);
  vfr_cmd->add_option("--mask", in.mask, "mask JSON");
  vfr_cmd->add_option("--iters", in.iters, "cascade stage (default 3)")->check(CLI::NonNegativeNumber);
  vfr_cmd->add_option("--seed", in.seed, "seed for the random test function");
  vfr_cmd->add_option("--level", in.level, "level of the random test function (default 4)");

  auto* pipe_cmd = app.add_subcommand("pipeline", "reduce, solve, cascade, wavelet and verify");
  add_common(pipe_cmd);
  pipe_cmd->add_option("--support", in.support, "box support to solve on");
  pipe_cmd->add_option("--mask", in.mask, "preloaded masks (skips solving)");
  pipe_cmd->add_option("--tol", in.tol, "residual tolerance");
  pipe_cmd->add_option("--restarts", in.restarts, "random starts")->check(CLI::PositiveNumber);
  pipe_cmd->add_option("--seed", in.seed, "random seed");
  pipe_cmd->add_option("--iters", in.iters, "cascade stage (default 6)")->check(CLI::NonNegativeNumber);

  auto* export_cmd = app.add_subcommand("export", "CSV from a sampled function or frame report");
  export_cmd->add_option("input", in.input, "JSON file")->required();
  export_cmd->add_option("--out", in.out, "CSV file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (reduce_cmd->parsed()) return cmd_reduce(in, out, err);
    if (solve_cmd->parsed()) return cmd_solve(in, out, err);
    if (cascade_cmd->parsed()) return cmd_cascade(in, out, err);
    if (wavelet_cmd->parsed()) return cmd_wavelet(in, out, err);
    if (vf_cmd->parsed()) return cmd_verify_filter(in, out, err);
    if (vfr_cmd->parsed()) return cmd_verify_frame(in, out, err);
    if (pipe_cmd->parsed()) return cmd_pipeline(in, out, err);
    if (export_cmd->parsed()) return cmd_export(in, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::overflow_error& e) {
    err << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const InvariantError& e) {
    err << "invariant breach: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace pfw
