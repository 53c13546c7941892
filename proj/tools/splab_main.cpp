#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "splab/diagnostics.hpp"
#include "splab/engine.hpp"
#include "splab/gallery.hpp"
#include "splab/herglotz.hpp"
#include "splab/io.hpp"
#include "splab/kernels/cauchy.hpp"

using namespace splab;
using io::Json;

namespace {

struct Globals {
  double tol = 1e-7;
  std::string out;
  std::uint64_t seed = 0;
  bool quiet = false;
};

struct Run {
  io::RunManifest manifest;
  std::filesystem::path dir;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidData, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x) { return io::format_double(x); }

Run start(const Globals& g, const std::string& command, const std::string& input,
          std::map<std::string, std::string> params) {
  params["tol"] = fmt(g.tol);
  params["kernel"] = std::string(kernels::to_string(kernels::active_isa()));
  Run r;
  r.manifest.command = command;
  r.manifest.parameters = std::move(params);
  r.manifest.seed = g.seed;
  r.manifest.input_hash = io::input_hash(input, r.manifest.parameters);
  r.dir = io::output_dir(r.manifest, g.out);
  return r;
}

void emit(const Globals& g, const Run& r, const std::string& name, const Json& result) {
  const auto path = io::write_artifact(r.dir, name, r.manifest, result);
  if (!g.quiet) {
    std::cout << result.dump(2) << "\n";
    std::cerr << "wrote " << path.string() << "\n";
  }
}

data::RankOneData rank_one(const io::Problem& p) {
  if (const auto* d = std::get_if<data::RankOneData>(&p)) return *d;
  throw Error(ErrorKind::InvalidData, "this command needs rank-one data");
}

data::RankNData rank_n(const io::Problem& p) {
  if (const auto* d = std::get_if<data::RankOneData>(&p)) return data::RankNData::from_rank_one(*d);
  return std::get<data::RankNData>(p);
}

void require_admissible(const io::Problem& p) {
  bool ok = true;
  if (const auto* d = std::get_if<data::RankOneData>(&p)) ok = data::validate(*d).condition_A;
  else ok = data::validate(std::get<data::RankNData>(p)).condition_A;
  if (!ok) throw Error(ErrorKind::Admissibility, "kappa - omega is singular: condition (A) fails");
}

engine::Route parse_route(const std::string& s) {
  if (s == "direct") return engine::Route::Direct;
  if (s == "shift") return engine::Route::Shift;
  return engine::Route::Auto;
}

Json clusters_json(const std::vector<engine::EigenCluster>& cs) {
  Json out = Json::array();
  for (const auto& c : cs)
    out.push_back(Json{{"value", io::to_json(c.value)}, {"multiplicity", c.multiplicity}, {"blocks", c.jordan_blocks}});
  return out;
}

Json real_vec(const RealVec& v) { return Json(v); }

template <class Real>
std::vector<Real> read_spectrum(const std::string& path, std::size_t k) {
  if (path.empty()) return gallery::default_incompleteness_spectrum<Real>(4 * k + 8);
  std::istringstream in(slurp(path));
  std::vector<Real> out;
  std::string tok;
  while (in >> tok) {
    for (char& c : tok)
      if (c == '[' || c == ']' || c == ',') c = ' ';
    std::istringstream parts(tok);
    std::string s;
    while (parts >> s) {
      try {
        if constexpr (std::is_floating_point_v<Real>) {
          std::size_t used = 0;
          const long double x = std::stold(s, &used);
          if (used != s.size()) throw std::invalid_argument(s);
          out.push_back(static_cast<Real>(x));
        } else {
          out.push_back(Real(s));
        }
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidData, path + ": not a number: " + s);
      }
    }
  }
  return out;
}

template <class Real>
Json incompleteness_json(const gallery::IncompletenessPipeline<Real>& p) {
  auto to_d = [](const std::vector<Real>& v) {
    RealVec out;
    for (const auto& x : v) out.push_back(static_cast<double>(x));
    return out;
  };
  auto decay = [](const std::vector<gallery::DecayCheck>& v) {
    Json out = Json::array();
    for (const auto& d : v)
      out.push_back(Json{{"N", d.power}, {"holds", d.holds}, {"from", d.from}, {"offending", d.offending}});
    return out;
  };
  return Json{{"n1", p.n1},
              {"n2", p.n2},
              {"sparse_k", p.sparse_k},
              {"v", to_d(p.v)},
              {"s", to_d(p.s)},
              {"p", to_d(p.p)},
              {"q_sum", static_cast<double>(p.q_sum)},
              {"d", to_d(p.d)},
              {"nu", to_d(p.nu)},
              {"residue_rel_err", p.residue_rel_err},
              {"max_residue_rel_err", p.max_residue_rel_err},
              {"residue_ok", p.residue_ok},
              {"sign_changes_per_gap", p.sign_changes_per_gap},
              {"one_zero_per_gap", p.one_zero_per_gap},
              {"decay_outside_n1", decay(p.decay_outside_n1)},
              {"decay_on_n1", decay(p.decay_on_n1)},
              {"partial_fraction_residual", p.partial_fraction_residual},
              {"weight_identity_residual", p.weight_identity_residual},
              {"sandwich_c1", p.sandwich_c1},
              {"sandwich_c2", p.sandwich_c2},
              {"sandwich_ok", p.sandwich_ok},
              {"hermite_biehler", p.hermite_biehler},
              {"log10_nu_partial_outside_n2", p.nu_partial_outside_n2},
              {"inv_t_partial_n2", p.inv_t_partial_n2},
              {"v_nudges", p.v_nudges},
              {"all_ok", p.all_ok()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral lab for singular rank-one perturbations"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Relative tolerance for comparisons");
  app.add_option("--out", g.out, "Output root (default $SPLAB_OUT or ./out)");
  app.add_option("--seed", g.seed, "Seed for sampled sweeps");
  app.add_flag("--quiet", g.quiet, "Do not echo results");
  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "Cauchy-sum kernel")->check(CLI::IsMember({"auto", "generic", "avx2"}));
  int status = 0;
  std::function<void()> action;
  auto defer = [&action](std::function<void()> f) { return [&action, f] { action = f; }; };

  std::string problem;
  std::string route = "auto";

  auto* validate = app.add_subcommand("validate", "Check admissibility of a problem file");
  validate->add_option("problem", problem)->required();
  validate->callback(defer([&] {
    const std::string text = slurp(problem);
    const io::Problem p = io::parse_problem(text);
    Run r = start(g, "validate", text, {});
    Json res;
    if (const auto* d = std::get_if<data::RankOneData>(&p)) {
      const auto rep = data::validate(*d);
      res = Json{{"rank", 1},
                 {"condition_A", rep.condition_A},
                 {"condition_A_star", rep.condition_A_star},
                 {"real_type", rep.real_type},
                 {"omega", io::to_json(rep.omega)},
                 {"kappa_minus_omega", io::to_json(rep.kappa_minus_omega)},
                 {"tolerance", rep.tolerance}};
      if (!rep.condition_A) status = exit_code(ErrorKind::Admissibility);
    } else {
      const auto rep = data::validate(std::get<data::RankNData>(p));
      res = Json{{"rank", std::get<data::RankNData>(p).rank()},
                 {"condition_A", rep.condition_A},
                 {"condition_A_star", rep.condition_A_star},
                 {"sigma_min", rep.sigma_min},
                 {"sigma_min_star", rep.sigma_min_star},
                 {"tolerance", rep.tolerance}};
      if (!rep.condition_A) status = exit_code(ErrorKind::Admissibility);
    }
    emit(g, r, "validation.json", res);
  }));

  auto* model = app.add_subcommand("model", "Model functions");
  model->require_subcommand(1);
  auto* eval = model->add_subcommand("eval", "Evaluate a model function on a grid (CSV)");
  std::string fn = "phi";
  std::vector<double> xr{-5.0, 5.0}, yr{0.5, 0.5};
  std::size_t nx = 101, ny = 1;
  std::optional<double> delta;
  eval->add_option("problem", problem)->required();
  eval->add_option("--fn", fn)->check(CLI::IsMember({"beta", "rho", "theta", "phi", "phi-tilde"}));
  eval->add_option("--x", xr)->expected(2);
  eval->add_option("--y", yr)->expected(2);
  eval->add_option("--nx", nx);
  eval->add_option("--ny", ny);
  eval->add_option("--delta", delta);
  eval->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto d = rank_one(io::parse_problem(text));
    model::ModelOptions mo;
    mo.delta = delta;
    const auto m = model::build_model(d, mo);
    const model::Which which = fn == "beta"    ? model::Which::Beta
                               : fn == "rho"   ? model::Which::Rho
                               : fn == "theta" ? model::Which::Theta
                               : fn == "phi"   ? model::Which::Phi
                                               : model::Which::PhiTilde;
    std::map<std::string, std::string> params{{"fn", fn},
                                              {"x", fmt(xr[0]) + "," + fmt(xr[1])},
                                              {"y", fmt(yr[0]) + "," + fmt(yr[1])},
                                              {"nx", std::to_string(nx)},
                                              {"ny", std::to_string(ny)}};
    if (delta) params["delta"] = fmt(*delta);
    Run r = start(g, "model eval", text, params);
    std::ostringstream csv;
    csv << "re_z,im_z,re_f,im_f\n";
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = ny == 1 ? yr[0] : yr[0] + (yr[1] - yr[0]) * static_cast<double>(j) / static_cast<double>(ny - 1);
      for (std::size_t i = 0; i < nx; ++i) {
        const double x = nx == 1 ? xr[0] : xr[0] + (xr[1] - xr[0]) * static_cast<double>(i) / static_cast<double>(nx - 1);
        Complex f;
        try {
          f = m.eval(which, {x, y});
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::EvaluationAtPole) throw;
          f = {std::nan(""), std::nan("")};
        }
        csv << fmt(x) << ',' << fmt(y) << ',' << fmt(f.real()) << ',' << fmt(f.imag()) << '\n';
      }
    }
    const auto path = io::write_text(r.dir, fn + ".csv", csv.str());
    io::write_artifact(r.dir, "manifest.json", r.manifest, Json{{"csv", path.filename().string()}});
    if (!g.quiet) std::cout << csv.str();
  }));

  auto spectrum_like = [&](const std::string& name, bool compare) {
    const std::string text = slurp(problem);
    const io::Problem p = io::parse_problem(text);
    require_admissible(p);
    Run r = start(g, name, text, {{"route", route}});
    engine::BuildOptions bo;
    bo.route = parse_route(route);
    if (std::holds_alternative<data::RankNData>(p)) {
      if (compare) throw Error(ErrorKind::InvalidData, "compare needs rank-one data");
      const auto real = engine::build_matrix(std::get<data::RankNData>(p), bo);
      const auto orc = engine::oracle_spectrum(real.L);
      emit(g, r, "spectrum.json",
           Json{{"oracle", io::to_json(orc.eigenvalues)}, {"jordan", clusters_json(orc.clusters)},
                {"inverse_residual", real.inverse_residual}});
      return;
    }
    const auto res = engine::compare_spectra(std::get<data::RankOneData>(p), bo, g.tol);
    Json out{{"oracle", io::to_json(res.oracle.eigenvalues)},
             {"model_zeros", io::to_json(res.model.zeros)},
             {"match_residual", res.match.matched_max},
             {"hausdorff", res.match.hausdorff},
             {"tolerance", res.tolerance},
             {"matches", res.matches},
             {"jordan", clusters_json(res.oracle.clusters)},
             {"route", res.realization.route == engine::Route::Shift ? "shift" : "direct"},
             {"shift", res.realization.shift},
             {"inverse_residual", res.realization.inverse_residual}};
    emit(g, r, name + ".json", out);
    if (!res.matches) status = 3;
  };

  auto* spectrum = app.add_subcommand("spectrum", "Matrix spectrum and model zeros");
  spectrum->add_option("problem", problem)->required();
  spectrum->add_option("--route", route)->check(CLI::IsMember({"auto", "direct", "shift"}));
  spectrum->callback(defer([&] { spectrum_like("spectrum", false); }));

  auto* compare = app.add_subcommand("compare", "Oracle against model with the match residual");
  compare->add_option("problem", problem)->required();
  compare->add_option("--route", route)->check(CLI::IsMember({"auto", "direct", "shift"}));
  compare->callback(defer([&] { spectrum_like("compare", true); }));

  std::vector<double> zeta{-1.0, 0.0};
  auto* clark = app.add_subcommand("clark", "Clark measure sigma_zeta");
  clark->add_option("problem", problem)->required();
  clark->add_option("--zeta", zeta)->expected(2);
  clark->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto d = rank_one(io::parse_problem(text));
    const auto m = model::build_model(d);
    Run r = start(g, "clark", text, {{"zeta", fmt(zeta[0]) + "," + fmt(zeta[1])}});
    const auto c = model::clark_measure(m, {zeta[0], zeta[1]});
    emit(g, r, "clark.json",
         Json{{"zeta", io::to_json(c.zeta)},
              {"atoms", real_vec(c.atoms)},
              {"weights", real_vec(c.weights)},
              {"p", c.p},
              {"q", c.q},
              {"mass_at_infinity", c.mass_at_infinity},
              {"atom_residual", c.atom_residual}});
  }));

  auto* diagnose = app.add_subcommand("diagnose", "Completeness diagnostics");
  diagnose->require_subcommand(1);

  double y_max = 1e4;
  std::size_t points = 200;
  auto* growth = diagnose->add_subcommand("growth", "Growth of phi along the imaginary axis");
  growth->add_option("problem", problem)->required();
  growth->add_option("--y-max", y_max);
  growth->add_option("--points", points);
  growth->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto m = model::build_model(rank_one(io::parse_problem(text)));
    Run r = start(g, "diagnose growth", text, {{"y_max", fmt(y_max)}, {"points", std::to_string(points)}});
    const auto gp = diag::growth_profile(m, y_max, points);
    std::ostringstream csv;
    csv << "y,abs_phi,abs_beta,abs_phi_tilde\n";
    for (std::size_t i = 0; i < gp.y.size(); ++i)
      csv << fmt(gp.y[i]) << ',' << fmt(gp.phi_abs[i]) << ',' << fmt(gp.beta_abs[i]) << ','
          << fmt(gp.phi_tilde_abs[i]) << '\n';
    io::write_text(r.dir, "growth.csv", csv.str());
    emit(g, r, "growth.json",
         Json{{"fitted_exponent", gp.fitted_exponent},
              {"exact_exponent", gp.exact_exponent},
              {"envelope_c", gp.envelope_c},
              {"envelope_spread", gp.envelope_spread}});
  }));

  double n_power = 2.0, tau = 1.0, eta = 1.0;
  auto* integral = diagnose->add_subcommand("integral", "Weighted integral of 1/|phi|^tau");
  integral->add_option("problem", problem)->required();
  integral->add_option("--n-power", n_power);
  integral->add_option("--tau", tau);
  integral->add_option("--eta", eta);
  integral->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto m = model::build_model(rank_one(io::parse_problem(text)));
    Run r = start(g, "diagnose integral", text,
                  {{"n_power", fmt(n_power)}, {"tau", fmt(tau)}, {"eta", fmt(eta)}});
    const auto rep = diag::integral_test(m, n_power, tau, eta);
    emit(g, r, "integral.json",
         Json{{"value", rep.value}, {"tail_bound", rep.tail_bound}, {"error", rep.error}, {"radius", rep.radius}});
  }));

  auto* macaev = diagnose->add_subcommand("macaev", "Invertibility of kappa - omega^T");
  macaev->add_option("problem", problem)->required();
  macaev->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto d = rank_n(io::parse_problem(text));
    Run r = start(g, "diagnose macaev", text, {});
    const auto rep = diag::macaev_check(d);
    emit(g, r, "macaev.json",
         Json{{"singular_sigma_min", rep.singular_sigma_min},
              {"singular_invertible", rep.singular_invertible},
              {"bounded_available", rep.bounded_matrix.has_value()},
              {"bounded_sigma_min", rep.bounded_sigma_min},
              {"bounded_invertible", rep.bounded_invertible}});
  }));

  auto* mass = diagnose->add_subcommand("mass", "Point mass at infinity of sigma_zeta");
  mass->add_option("problem", problem)->required();
  mass->add_option("--zeta", zeta)->expected(2);
  mass->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto m = model::build_model(rank_one(io::parse_problem(text)));
    Run r = start(g, "diagnose mass", text, {{"zeta", fmt(zeta[0]) + "," + fmt(zeta[1])}});
    const auto rep = diag::mass_detect(m, {zeta[0], zeta[1]});
    emit(g, r, "mass.json",
         Json{{"has_mass", rep.has_mass},
              {"limit", std::isfinite(rep.limit) ? Json(rep.limit) : Json(nullptr)},
              {"p", rep.p_est},
              {"y", real_vec(rep.y)},
              {"scaled", real_vec(rep.scaled)}});
  }));

  std::size_t budget = 10000;
  auto* synthesis = diagnose->add_subcommand("synthesis", "Synthesis defect over partitions");
  synthesis->add_option("problem", problem)->required();
  synthesis->add_option("--budget", budget);
  synthesis->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto d = rank_one(io::parse_problem(text));
    const auto m = model::build_model(d);
    Run r = start(g, "diagnose synthesis", text, {{"budget", std::to_string(budget)}});
    const auto sys = engine::eigensystem(d, m);
    const auto sweep = diag::enumerate_partitions(sys, budget, g.seed);
    std::vector<int> j2;
    for (bool b : sweep.worst.in_j2) j2.push_back(b ? 1 : 0);
    emit(g, r, "synthesis.json",
         Json{{"worst_sigma_min", sweep.worst.sigma_min},
              {"worst_partition", j2},
              {"worst_gram_condition", sweep.worst.gram_condition},
              {"best_sigma_min", sweep.best_sigma_min},
              {"evaluated", sweep.evaluated},
              {"exhaustive", sweep.exhaustive},
              {"offdiag_leakage", sys.offdiag_leakage}});
  }));

  std::vector<double> rect{0.1, 50.0, 0.0, 10.0};
  auto* window = diagnose->add_subcommand("volterra-window", "Zeros of phi in a rectangle");
  window->add_option("problem", problem)->required();
  window->add_option("--rect", rect, "x0 x1 y0 y1")->expected(4);
  window->callback(defer([&] {
    const std::string text = slurp(problem);
    const auto m = model::build_model(rank_one(io::parse_problem(text)));
    Run r = start(g, "diagnose volterra-window", text,
                  {{"rect", fmt(rect[0]) + "," + fmt(rect[1]) + "," + fmt(rect[2]) + "," + fmt(rect[3])}});
    const auto w = diag::volterra_window_check(m, {rect[0], rect[1], rect[2], rect[3]});
    emit(g, r, "window.json",
         Json{{"count", w.count},
              {"winding", w.winding},
              {"distance_to_integer", w.distance_to_integer},
              {"panels_per_edge", w.panels_per_edge},
              {"min_abs_phi", w.min_abs_phi},
              {"contour", {w.contour.x0, w.contour.x1, w.contour.y0, w.contour.y1}}});
  }));

  auto* gal = app.add_subcommand("gallery", "Explicit constructions");
  gal->require_subcommand(1);

  double eps = 1.0, alpha1 = 0.0, alpha2 = 0.0;
  std::size_t n_terms = 500;
  auto* sharp = gal->add_subcommand("sharp", "Zero-free example built on cos(pi sqrt z)");
  sharp->add_option("--eps", eps);
  sharp->add_option("--alpha1", alpha1);
  sharp->add_option("--alpha2", alpha2);
  sharp->add_option("--n", n_terms);
  sharp->add_option("--rect", rect, "x0 x1 y0 y1")->expected(4);
  sharp->callback(defer([&] {
    std::map<std::string, std::string> params{
        {"eps", fmt(eps)}, {"alpha1", fmt(alpha1)}, {"alpha2", fmt(alpha2)}, {"n", std::to_string(n_terms)},
        {"rect", fmt(rect[0]) + "," + fmt(rect[1]) + "," + fmt(rect[2]) + "," + fmt(rect[3])}};
    Run r = start(g, "gallery sharp", "", params);
    const auto inst = gallery::sharp_instance(eps, alpha1, alpha2, n_terms);
    const auto zf = gallery::sharp_zero_freeness(inst, {rect[0], rect[1], rect[2], rect[3]});
    std::ostringstream csv;
    csv << "n,t,a,b,smooth_a_partial,smooth_b_partial\n";
    for (std::size_t k = 0; k < inst.n; ++k)
      csv << k + 1 << ',' << fmt(inst.data.base().t(k)) << ',' << fmt(inst.data.a(k).real()) << ','
          << fmt(inst.data.b(k).real()) << ',' << fmt(inst.smooth_a_partial[k]) << ','
          << fmt(inst.smooth_b_partial[k]) << '\n';
    io::write_text(r.dir, "sharp.csv", csv.str());
    emit(g, r, "sharp.json",
         Json{{"parameters", params},
              {"count", zf.window.count},
              {"winding", zf.window.winding},
              {"min_abs_phi", zf.min_abs_phi},
              {"smooth_a_sum", inst.smooth_a_partial.back()},
              {"smooth_b_sum", inst.smooth_b_partial.back()},
              {"smooth_tail_monotone", inst.smooth_tail_monotone}});
    if (zf.window.count != 0) status = 3;
  }));

  std::vector<double> zv{-1.0, 0.0};
  std::size_t ml_n = 1000;
  auto* ml = gal->add_subcommand("ml-check", "Partial fractions of 1/cos(pi sqrt z)");
  ml->add_option("--z", zv)->expected(2);
  ml->add_option("--n", ml_n);
  ml->callback(defer([&] {
    std::map<std::string, std::string> params{{"z", fmt(zv[0]) + "," + fmt(zv[1])}, {"n", std::to_string(ml_n)}};
    Run r = start(g, "gallery ml-check", "", params);
    const auto c = gallery::mittag_leffler_check({zv[0], zv[1]}, ml_n);
    emit(g, r, "ml.json",
         Json{{"parameters", params},
              {"lhs", io::to_json(c.lhs)},
              {"rhs_partial", io::to_json(c.rhs_partial)},
              {"err", c.err},
              {"tail_bound", c.tail_bound},
              {"within_bound", c.within_bound}});
    if (!c.within_bound) status = 3;
  }));

  std::size_t k_lac = 30;
  std::string spectrum_file, precision = "mp50";
  bool scan = false;
  auto* inc = gal->add_subcommand("incompleteness", "Incompleteness construction pipeline");
  inc->add_option("--k", k_lac);
  inc->add_option("--spectrum", spectrum_file, "Whitespace or JSON list of t_n (default 1.5^n)");
  inc->add_option("--precision", precision)->check(CLI::IsMember({"double", "long", "mp50"}));
  inc->add_flag("--max-k", scan, "Scan K for the largest value passing the residue check");
  inc->callback(defer([&] {
    const std::string input = spectrum_file.empty() ? std::string() : slurp(spectrum_file);
    std::map<std::string, std::string> params{{"k", std::to_string(k_lac)}, {"precision", precision}};
    if (scan) params["max_k"] = "1";
    Run r = start(g, "gallery incompleteness", input, params);
    gallery::IncompletenessOptions opts;
    opts.k = k_lac;
    Json res;
    if (precision == "double") {
      res = incompleteness_json(gallery::incompleteness_build<double>(read_spectrum<double>(spectrum_file, k_lac), opts));
    } else if (precision == "long") {
      res = incompleteness_json(
          gallery::incompleteness_build<long double>(read_spectrum<long double>(spectrum_file, k_lac), opts));
    } else {
      res = incompleteness_json(
          gallery::incompleteness_build<gallery::Mp50>(read_spectrum<gallery::Mp50>(spectrum_file, k_lac), opts));
    }
    res["parameters"] = params;
    if (scan) {
      std::vector<std::size_t> ks;
      for (std::size_t k = 2; k <= 64; ++k) ks.push_back(k);
      Json mk = Json::array();
      for (const auto& m : gallery::incompleteness_max_k(ks))
        mk.push_back(Json{{"precision", m.precision}, {"max_k", m.max_k}, {"first_failure", m.first_failure}});
      res["max_k"] = mk;
    }
    emit(g, r, "incompleteness.json", res);
    if (!res["all_ok"].get<bool>()) status = 3;
  }));

  std::size_t lac_count = 0;
  auto* lac = gal->add_subcommand("lacunary", "Lacunary sequence x_k");
  lac->add_option("--spectrum", spectrum_file)->required();
  lac->add_option("--count", lac_count);
  lac->callback(defer([&] {
    const std::string input = slurp(spectrum_file);
    Run r = start(g, "gallery lacunary", input, {{"count", std::to_string(lac_count)}});
    const auto t = read_spectrum<double>(spectrum_file, 0);
    const auto rep = gallery::lacunary_sequence(t, lac_count);
    emit(g, r, "lacunary.json",
         Json{{"x", real_vec(rep.x)}, {"witnesses", real_vec(rep.witnesses)},
              {"inequalities_hold", rep.inequalities_hold}});
  }));

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 1;
    }
    if (kernel == "generic") kernels::force_isa(kernels::Isa::Generic);
    if (kernel == "avx2" && !kernels::force_isa(kernels::Isa::Avx2))
      throw Error(ErrorKind::BadParameters, "avx2 kernel not available on this machine");
    if (action) action();
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return status;
}
