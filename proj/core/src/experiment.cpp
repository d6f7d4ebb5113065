#include "pnglab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "pnglab/errors.hpp"
#include "pnglab/fredholm.hpp"
#include "pnglab/png.hpp"
#include "pnglab/random.hpp"
#include "pnglab/rmt.hpp"
#include "pnglab/special.hpp"
#include "pnglab/statistics.hpp"

#ifndef PNGLAB_VERSION
#define PNGLAB_VERSION "0.0.0"
#endif

namespace pnglab {

using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kNames = {
    {ExperimentKind::PngHeight, "png-height"}, {ExperimentKind::PngLayers, "png-layers"},
    {ExperimentKind::RmtEdge, "rmt-edge"},     {ExperimentKind::RmtDyson, "rmt-dyson"},
    {ExperimentKind::DistEval, "dist-eval"},   {ExperimentKind::DistJoint, "dist-joint"},
    {ExperimentKind::Compare, "compare"},
};

std::vector<ParameterSpec> with_shared(std::vector<ParameterSpec> specific) {
  std::vector<ParameterSpec> all = {
      {"seed", "1", false, "master seed; sample i uses stream (seed, i)"},
      {"workers", "1", false, "worker threads"},
      {"out", "", false, "output path (stdout when empty)"},
      {"format", "csv", false, "csv or json"},
      {"quad-order", "48", false, "Nystrom order n (certified against 2n)"},
  };
  all.insert(all.end(), specific.begin(), specific.end());
  return all;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError("invalid number for " + what + ": '" + text + "'");
  }
}

long long to_int(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError("invalid integer for " + what + ": '" + text + "'");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

Json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? Json(*d) : Json(nullptr);
  return std::get<std::string>(c);
}

// Runs fn(i) for i < count on up to `workers` threads; results are indexed,
// so scheduling does not affect them.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, int workers, F&& fn) {
  std::vector<T> out(count);
  const auto k = static_cast<std::size_t>(std::clamp<long long>(workers, 1, std::max<long long>(1, count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  if (k == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(k);
    for (std::size_t w = 0; w < k; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void add_moments(Report& r, const std::vector<double>& v, const std::string& prefix = "") {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= std::max<double>(1.0, static_cast<double>(v.size()) - 1.0);
  r.summary.emplace_back(prefix + "mean", mean);
  r.summary.emplace_back(prefix + "variance", var);
}

void record(Report& r, const Certificate& c, const std::string& where) {
  if (!c.passed && r.certified) {
    r.certified = false;
    std::ostringstream os;
    os << where << ": orders " << c.order << " and " << c.check_order << " differ by " << c.discrepancy
       << " (tolerance " << c.tolerance << ")";
    r.failure = os.str();
  }
}

std::size_t sample_count(const ExperimentConfig& cfg) {
  const long long s = cfg.get_int("samples");
  if (s < 1) throw ConfigurationError("samples must be >= 1");
  return static_cast<std::size_t>(s);
}

int matrix_size(const ExperimentConfig& cfg) {
  const long long n = cfg.get_int("N");
  if (n < 1 || n > 100000) throw ConfigurationError("N must lie in [1, 100000]");
  return static_cast<int>(n);
}

// ---------------------------------------------------------------------------

Report run_png_height(const ExperimentConfig& cfg) {
  const PngParams p{cfg.get_double("q"), cfg.get_double("alpha"), matrix_size(cfg)};
  p.validate();
  std::string scaling = cfg.get("scaling");
  if (scaling == "auto") scaling = p.alpha > 1.0 ? "gauss" : "tw";
  if (scaling != "tw" && scaling != "gauss") throw ConfigurationError("scaling must be auto, tw or gauss");
  const double tau = cfg.get_double("tau");
  if (scaling == "gauss" && tau != 0.0) throw ConfigurationError("gaussian scaling is defined at tau = 0 only");
  const int site = png::site_for_tau(tau, p);
  if (scaling == "gauss" && !(p.alpha > 1.0)) throw DomainError("gaussian scaling requires alpha > 1");

  Report r;
  r.experiment = ExperimentKind::PngHeight;
  {
    std::ostringstream os;
    os << "PNG droplet height h(r, 2N) at r=" << site << " (tau=" << tau << "), q=" << p.q << ", alpha=" << p.alpha
       << "; large-N law: "
       << (p.alpha < 1.0 ? "F2" : p.alpha == 1.0 ? "F1^2 (GOE^2)" : "standard normal (gaussian scaling)");
    r.description = os.str();
  }
  const std::uint64_t seed = cfg.get_seed();
  const auto heights = parallel_map<std::int64_t>(sample_count(cfg), cfg.workers(), [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    return png::run(p, rng).at(site);
  });
  r.table.columns = {{"sample", "int"}, {"h", "int"}, {"scaled", "float"}};
  std::vector<double> scaled(heights.size());
  for (std::size_t i = 0; i < heights.size(); ++i) {
    scaled[i] = scaling == "gauss" ? png::scale_height_gaussian(heights[i], p)
                                   : png::scale_height(heights[i], p) + tau * tau;
    r.table.rows.push_back({static_cast<std::int64_t>(i), heights[i], scaled[i]});
  }
  r.summary.emplace_back("samples", static_cast<double>(heights.size()));
  r.summary.emplace_back("site", site);
  add_moments(r, scaled);
  return r;
}

Report run_png_layers(const ExperimentConfig& cfg) {
  const PngParams p{cfg.get_double("q"), cfg.get_double("alpha"), matrix_size(cfg)};
  p.validate();
  const long long layers = cfg.get_int("layers");
  if (layers < 1 || layers > 10000) throw ConfigurationError("layers must lie in [1, 10000]");
  Rng rng = make_stream(cfg.get_seed(), 0);
  MultiLayerField f = MultiLayerField::flat(static_cast<int>(layers));
  for (int s = 0; s < 2 * p.n; ++s) f = png::evolve_multilayer(f, p, rng);

  Report r;
  r.experiment = ExperimentKind::PngLayers;
  r.description = "multi-layer PNG droplet at time 2N (one trajectory, stream 0)";
  r.table.columns = {{"layer", "int"}, {"r", "int"}, {"h", "int"}};
  for (std::size_t l = 0; l < f.layers.size(); ++l) {
    for (int x = -f.t; x <= f.t; ++x) {
      r.table.rows.push_back({static_cast<std::int64_t>(l), static_cast<std::int64_t>(x), f.at(l, x)});
    }
  }
  r.summary.emplace_back("nonempty_layers", static_cast<double>(f.nonempty_layers()));
  r.summary.emplace_back("h0_top", static_cast<double>(f.at(0, 0)));
  return r;
}

SourceSpec source_from(const ExperimentConfig& cfg, int n, bool dynamical) {
  if (cfg.has("eps")) {
    SourceSpec s = SourceSpec::from_values(cfg.get_list("eps"));
    if (s.n != n) throw ConfigurationError("eps has " + std::to_string(s.n) + " entries but N=" + std::to_string(n));
    return s;
  }
  if (!dynamical && cfg.has("Lambda")) return SourceSpec::rank_one_lambda(n, cfg.get_double("Lambda"));
  if (dynamical && cfg.has("omega")) return SourceSpec::rank_one_omega(n, cfg.get_double("omega"));
  return SourceSpec::zeros(n);
}

Report run_rmt_edge(const ExperimentConfig& cfg) {
  const int n = matrix_size(cfg);
  const std::string ensemble = cfg.get("ensemble");
  const std::string method = cfg.get("method");
  if (method != "auto" && method != "dense" && method != "tridiagonal") {
    throw ConfigurationError("method must be auto, dense or tridiagonal");
  }
  const bool dense = method == "dense";
  SourceSpec src = SourceSpec::zeros(n);
  if (ensemble == "source") {
    src = source_from(cfg, n, false);
  } else if (ensemble != "gue" && ensemble != "goe" && ensemble != "goe2") {
    throw ConfigurationError("ensemble must be gue, goe, goe2 or source");
  }
  if (method == "tridiagonal") {
    const auto nz = std::count_if(src.epsilons.begin(), src.epsilons.end(), [](double e) { return e != 0.0; });
    if (nz > 1) throw ConfigurationError("tridiagonal method supports at most one nonzero source entry");
  }
  std::string scaling = cfg.get("scaling");
  const bool have_lambda = ensemble == "source" && cfg.has("Lambda") && !cfg.has("eps");
  if (scaling == "auto") scaling = have_lambda && cfg.get_double("Lambda") > 1.0 ? "gauss" : "tw";
  if (scaling != "tw" && scaling != "gauss") throw ConfigurationError("scaling must be auto, tw or gauss");
  if (scaling == "gauss" && !have_lambda) throw ConfigurationError("gaussian scaling needs Lambda");
  const double lambda = have_lambda ? cfg.get_double("Lambda") : 0.0;
  if (scaling == "gauss") kernels::gauss_scale(lambda);

  const auto goe_top = [&](Rng& rng) {
    return dense ? rmt::eigs_symmetric(rmt::sample_goe(n, rng)).maxCoeff()
                 : rmt::top_eigenvalue(rmt::sample_goe_tridiagonal(n, rng));
  };
  const std::uint64_t seed = cfg.get_seed();
  const auto tops = parallel_map<double>(sample_count(cfg), cfg.workers(), [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    if (ensemble == "goe") return goe_top(rng);
    if (ensemble == "goe2") {
      const double a = goe_top(rng);
      return std::max(a, goe_top(rng));
    }
    if (dense) return rmt::eigs_hermitian(rmt::sample_source_matrix(n, src, rng)).maxCoeff();
    return rmt::sample_source_top(n, src, rng);
  });

  Report r;
  r.experiment = ExperimentKind::RmtEdge;
  {
    std::ostringstream os;
    os << "largest eigenvalue, ensemble " << ensemble << ", N=" << n;
    if (have_lambda) os << ", Lambda=" << lambda;
    os << ", " << (scaling == "tw" ? "edge scaling (lambda - sqrt(2N)) sqrt(2) N^(1/6)"
                                   : "gaussian scaling (lambda - A_G sqrt(N)) / B_G");
    r.description = os.str();
  }
  r.table.columns = {{"sample", "int"}, {"lambda1", "float"}, {"scaled", "float"}};
  std::vector<double> scaled(tops.size());
  for (std::size_t i = 0; i < tops.size(); ++i) {
    scaled[i] = scaling == "tw" ? rmt::edge_scale(tops[i], n) : rmt::edge_scale_gaussian(tops[i], n, lambda);
    r.table.rows.push_back({static_cast<std::int64_t>(i), tops[i], scaled[i]});
  }
  r.summary.emplace_back("samples", static_cast<double>(tops.size()));
  add_moments(r, scaled);
  return r;
}

Report run_rmt_dyson(const ExperimentConfig& cfg) {
  const int n = matrix_size(cfg);
  const TimeGrid grid{cfg.get_list("times")};
  grid.validate();
  const SourceSpec src = source_from(cfg, n, true);
  const std::uint64_t seed = cfg.get_seed();
  const auto tops = parallel_map<std::vector<double>>(sample_count(cfg), cfg.workers(), [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    const auto spectra = rmt::sample_dyson_chain(n, src, grid, rng);
    std::vector<double> v;
    v.reserve(spectra.size());
    for (const auto& s : spectra) v.push_back(s.maxCoeff());
    return v;
  });
  Report r;
  r.experiment = ExperimentKind::RmtDyson;
  r.description = "largest eigenvalue of the Ornstein-Uhlenbeck matrix chain started from exp(-tr H^2 + tr V H)";
  r.table.columns = {{"sample", "int"}};
  for (std::size_t k = 0; k < grid.times.size(); ++k) r.table.columns.push_back({"lambda1_t" + std::to_string(k), "float"});
  for (std::size_t i = 0; i < tops.size(); ++i) {
    std::vector<Cell> row = {static_cast<std::int64_t>(i)};
    for (double v : tops[i]) row.emplace_back(v);
    r.table.rows.push_back(std::move(row));
  }
  r.summary.emplace_back("samples", static_cast<double>(tops.size()));
  for (std::size_t k = 0; k < grid.times.size(); ++k) {
    std::vector<double> col(tops.size());
    for (std::size_t i = 0; i < tops.size(); ++i) col[i] = tops[i][k];
    add_moments(r, col, "t" + std::to_string(k) + "_");
  }
  return r;
}

struct EvalPoint {
  double value = 0.0;
  Certificate cert;
};

Report run_dist_eval(const ExperimentConfig& cfg) {
  const std::string which = cfg.get("which");
  const std::vector<double> grid = cfg.get_grid("s");
  const int order = static_cast<int>(cfg.get_int("quad-order"));
  const double cutoff = cfg.get_double("cutoff");
  const double omega = cfg.get_double("omega");
  const double tau = cfg.get_double("tau");

  Report r;
  r.experiment = ExperimentKind::DistEval;
  std::optional<ExtendedKernel> kernel;
  if (which == "F2") {
    kernel = ExtendedKernel::airy();
    r.description = "GUE Tracy-Widom distribution F2";
  } else if (which == "GOE2") {
    kernel = ExtendedKernel::goe2();
    r.description = "F1^2, the law of the larger of two independent GOE edges";
  } else if (which == "transition") {
    if (omega + tau < 0.0) throw DomainError("transition law requires omega + tau >= 0");
    kernel = ExtendedKernel::transition(omega);
    r.description = "one-point law of the transition kernel, omega=" + format_double(omega) + ", tau=" + format_double(tau);
  } else if (which == "finite-n") {
    const int n = cfg.has("eps") ? static_cast<int>(cfg.get_list("eps").size()) : matrix_size(cfg);
    kernel = ExtendedKernel::finite_static(source_from(cfg, n, false));
    r.description = "exact law of the largest eigenvalue of H + diag(eps), N=" + std::to_string(n);
  } else if (which == "gauss-limit") {
    kernel = ExtendedKernel::gauss_limit(cfg.get_double("Lambda"), cfg.has("N") ? matrix_size(cfg) : 1);
    r.description = "gaussian-regime limit law (rank-one Fredholm form)";
  } else if (which == "normal") {
    r.description = "standard normal distribution";
  } else {
    throw ConfigurationError("which must be F2, GOE2, transition, finite-n, gauss-limit or normal");
  }
  if (kernel) {
    DeterminantProblem probe{*kernel, {which == "transition" ? tau : 0.0}, {0.0}, order, cutoff};
    probe.validate();
  }

  const auto pts = parallel_map<EvalPoint>(grid.size(), cfg.workers(), [&](std::size_t i) {
    EvalPoint e;
    if (!kernel) {
      e.value = special::std_normal_cdf(grid[i]);
      e.cert.passed = true;
      return e;
    }
    DeterminantProblem p{*kernel, {which == "transition" ? tau : 0.0}, {grid[i]}, order, cutoff};
    const DeterminantResult d = fredholm::det_multi_certified(p);
    e.value = d.value;
    e.cert = d.certificate;
    return e;
  });
  r.table.columns = {{"s", "float"}, {"F", "float"}, {"discrepancy", "float"}};
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    record(r, pts[i].cert, "s=" + format_double(grid[i]));
    worst = std::max(worst, pts[i].cert.discrepancy);
    r.table.rows.push_back({grid[i], pts[i].value, pts[i].cert.discrepancy});
  }
  r.summary.emplace_back("points", static_cast<double>(grid.size()));
  r.summary.emplace_back("max_discrepancy", worst);
  return r;
}

Report run_dist_joint(const ExperimentConfig& cfg) {
  const std::string kind = cfg.get("kernel");
  const std::vector<double> times = cfg.get_list("times");
  const std::vector<double> grid = cfg.get_grid("s");
  const int order = static_cast<int>(cfg.get_int("quad-order"));
  const double cutoff = cfg.get_double("cutoff");

  Report r;
  r.experiment = ExperimentKind::DistJoint;
  std::optional<ExtendedKernel> kernel;
  if (kind == "airy") {
    kernel = ExtendedKernel::airy();
    r.description = "joint law of the Airy process (extended Airy kernel)";
  } else if (kind == "transition") {
    kernel = ExtendedKernel::transition(cfg.get_double("omega"));
    r.description = "joint law under the transition kernel, omega=" + cfg.get("omega");
  } else if (kind == "finite-n") {
    const int n = cfg.has("eps") ? static_cast<int>(cfg.get_list("eps").size()) : matrix_size(cfg);
    kernel = ExtendedKernel::finite_dynamical(source_from(cfg, n, true), times);
    r.description = "exact joint law of the largest eigenvalues of the matrix chain, N=" + std::to_string(n);
  } else {
    throw ConfigurationError("kernel must be airy, transition or finite-n");
  }
  const std::size_t m = times.size();
  std::size_t rows = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (rows > 1000000 / std::max<std::size_t>(1, grid.size())) throw ConfigurationError("dist-joint grid too large");
    rows *= grid.size();
  }
  DeterminantProblem probe{*kernel, times, std::vector<double>(m, 0.0), order, cutoff};
  probe.validate();

  const auto thresholds_of = [&](std::size_t idx) {
    std::vector<double> t(m);
    for (std::size_t k = m; k-- > 0;) {
      t[k] = grid[idx % grid.size()];
      idx /= grid.size();
    }
    return t;
  };
  const auto pts = parallel_map<EvalPoint>(rows, cfg.workers(), [&](std::size_t i) {
    DeterminantProblem p{*kernel, times, thresholds_of(i), order, cutoff};
    const DeterminantResult d = fredholm::det_multi_certified(p);
    return EvalPoint{d.value, d.certificate};
  });
  for (std::size_t k = 0; k < m; ++k) r.table.columns.push_back({"s" + std::to_string(k + 1), "float"});
  r.table.columns.push_back({"F", "float"});
  r.table.columns.push_back({"discrepancy", "float"});
  double worst = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto t = thresholds_of(i);
    std::vector<Cell> row(t.begin(), t.end());
    row.emplace_back(pts[i].value);
    row.emplace_back(pts[i].cert.discrepancy);
    record(r, pts[i].cert, "row " + std::to_string(i));
    worst = std::max(worst, pts[i].cert.discrepancy);
    r.table.rows.push_back(std::move(row));
  }
  r.summary.emplace_back("points", static_cast<double>(rows));
  r.summary.emplace_back("max_discrepancy", worst);
  return r;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  for (auto& x : split(s, ',')) {
    if (!x.empty()) out.push_back(x);
  }
  return out;
}

Report run_compare(const ExperimentConfig& cfg) {
  const Table input = read_table(cfg.get("input"));
  const std::string against = cfg.get("against");
  Report r;
  r.experiment = ExperimentKind::Compare;

  if (against == "table") {
    if (!cfg.has("reference")) throw ConfigurationError("compare --against table needs reference");
    const Table ref = read_table(cfg.get("reference"));
    std::vector<std::string> names = split_names(cfg.get("columns"));
    if (names.empty()) {
      for (const auto& c : input.columns) {
        if (c.name.rfind("lambda1", 0) == 0 || c.name == "scaled") names.push_back(c.name);
      }
    }
    std::vector<std::string> thr;
    for (const auto& c : ref.columns) {
      if (c.name == "s" || (c.name.size() > 1 && c.name[0] == 's' && std::isdigit(static_cast<unsigned char>(c.name[1])))) {
        thr.push_back(c.name);
      }
    }
    if (thr.size() != names.size() || names.empty()) {
      throw ConfigurationError("compare: reference has " + std::to_string(thr.size()) + " threshold columns, input " +
                               std::to_string(names.size()) + " sample columns");
    }
    std::vector<std::vector<double>> cols;
    for (const auto& nme : names) cols.push_back(input.numeric_column(nme));
    std::vector<std::vector<double>> samples(cols[0].size(), std::vector<double>(names.size()));
    for (std::size_t k = 0; k < names.size(); ++k)
      for (std::size_t i = 0; i < cols[k].size(); ++i) samples[i][k] = cols[k][i];
    std::vector<std::vector<double>> tcols;
    for (const auto& nme : thr) tcols.push_back(ref.numeric_column(nme));
    const std::vector<double> fref = ref.numeric_column("F");

    r.description = "empirical joint CDF of the input columns against a tabulated reference";
    for (std::size_t k = 0; k < thr.size(); ++k) r.table.columns.push_back({thr[k], "float"});
    r.table.columns.push_back({"empirical", "float"});
    r.table.columns.push_back({"reference", "float"});
    r.table.columns.push_back({"difference", "float"});
    double sup = 0.0;
    for (std::size_t i = 0; i < fref.size(); ++i) {
      std::vector<double> t(thr.size());
      for (std::size_t k = 0; k < thr.size(); ++k) t[k] = tcols[k][i];
      const double emp = joint_ecdf(samples, t);
      sup = std::max(sup, std::fabs(emp - fref[i]));
      std::vector<Cell> row(t.begin(), t.end());
      row.emplace_back(emp);
      row.emplace_back(fref[i]);
      row.emplace_back(emp - fref[i]);
      r.table.rows.push_back(std::move(row));
    }
    r.summary.emplace_back("samples", static_cast<double>(samples.size()));
    r.summary.emplace_back("sup_difference", sup);
    return r;
  }

  const std::string column = cfg.get("column");
  const EmpiricalCdf ecdf(input.numeric_column(column));
  std::function<double(double)> cdf;
  if (against == "F2") {
    cdf = tabulate_cdf(fredholm::dist_f2, -8.0, 6.0, 0.05);
  } else if (against == "GOE2") {
    cdf = tabulate_cdf(fredholm::dist_goe2, -8.0, 6.0, 0.05);
  } else if (against == "transition") {
    const double omega = cfg.get_double("omega"), tau = cfg.get_double("tau");
    cdf = tabulate_cdf([&](double s) { return fredholm::dist_transition(s, omega, tau); }, -8.0, 6.0, 0.05);
  } else if (against == "normal") {
    cdf = special::std_normal_cdf;
  } else {
    throw ConfigurationError("against must be F2, GOE2, transition, normal or table");
  }
  r.description = "Kolmogorov-Smirnov comparison of column '" + column + "' with " + against;
  const double ks = ks_distance(ecdf, cdf);
  r.table.columns = {{"x", "float"}, {"empirical", "float"}, {"predicted", "float"}, {"difference", "float"}};
  for (double x : parse_grid("-6:4:0.1")) {
    const double e = ecdf(x), p = cdf(x);
    r.table.rows.push_back({x, e, p, e - p});
  }
  r.summary.emplace_back("samples", static_cast<double>(ecdf.n()));
  r.summary.emplace_back("ks", ks);
  return r;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, n] : kNames) {
    if (k == kind) return n;
  }
  return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ConfigurationError("unknown experiment '" + name + "'");
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> all = [] {
    std::vector<ExperimentKind> v;
    for (const auto& kn : kNames) v.push_back(kn.first);
    return v;
  }();
  return all;
}

const std::vector<ParameterSpec>& parameter_specs(ExperimentKind kind) {
  static const std::map<ExperimentKind, std::vector<ParameterSpec>> specs = {
      {ExperimentKind::PngHeight,
       with_shared({{"q", "0.25", false, "bulk nucleation parameter"},
                    {"alpha", "1.0", false, "source strength"},
                    {"N", "", true, "final time is 2N"},
                    {"samples", "1000", false, "number of trajectories"},
                    {"tau", "0", false, "scaled position"},
                    {"scaling", "auto", false, "auto, tw or gauss"}})},
      {ExperimentKind::PngLayers,
       with_shared({{"q", "0.25", false, "bulk nucleation parameter"},
                    {"alpha", "1.0", false, "source strength"},
                    {"N", "", true, "final time is 2N"},
                    {"layers", "10", false, "number of layers"}})},
      {ExperimentKind::RmtEdge,
       with_shared({{"N", "", true, "matrix size"},
                    {"samples", "1000", false, "number of matrices"},
                    {"ensemble", "source", false, "gue, goe, goe2 or source"},
                    {"Lambda", "", false, "rank-one source eps_1 = Lambda sqrt(N/2)"},
                    {"eps", "", false, "comma-separated source entries"},
                    {"scaling", "auto", false, "auto, tw or gauss"},
                    {"method", "auto", false, "auto, dense or tridiagonal"}})},
      {ExperimentKind::RmtDyson,
       with_shared({{"N", "", true, "matrix size"},
                    {"times", "", true, "comma-separated times starting at 0"},
                    {"eps", "", false, "comma-separated source entries"},
                    {"omega", "", false, "rank-one source eps_1 = sqrt(2N)(1 - omega N^(-1/3))"},
                    {"samples", "1000", false, "number of chains"}})},
      {ExperimentKind::DistEval,
       with_shared({{"which", "", true, "F2, GOE2, transition, finite-n, gauss-limit or normal"},
                    {"s", "", true, "grid lo:hi:step"},
                    {"omega", "0", false, "transition parameter"},
                    {"tau", "0", false, "transition time"},
                    {"N", "", false, "matrix size (finite-n, gauss-limit)"},
                    {"eps", "", false, "comma-separated source entries (finite-n)"},
                    {"Lambda", "", false, "rank-one source strength"},
                    {"cutoff", "14", false, "window length beyond the threshold"}})},
      {ExperimentKind::DistJoint,
       with_shared({{"kernel", "", true, "airy, transition or finite-n"},
                    {"times", "", true, "comma-separated times"},
                    {"s", "", true, "grid lo:hi:step used for every time"},
                    {"omega", "", false, "transition parameter / rank-one source"},
                    {"N", "", false, "matrix size (finite-n)"},
                    {"eps", "", false, "comma-separated source entries (finite-n)"},
                    {"cutoff", "14", false, "window length beyond the threshold"}})},
      {ExperimentKind::Compare,
       with_shared({{"input", "", true, "data file written by a sampling experiment"},
                    {"against", "", true, "F2, GOE2, transition, normal or table"},
                    {"column", "scaled", false, "sample column for one-dimensional comparisons"},
                    {"columns", "", false, "sample columns matched to the reference thresholds"},
                    {"reference", "", false, "table written by dist-eval or dist-joint"},
                    {"omega", "0", false, "transition parameter"},
                    {"tau", "0", false, "transition time"}})},
  };
  return specs.at(kind);
}

void ExperimentConfig::validate() const {
  const auto& specs = parameter_specs(experiment);
  for (const auto& [k, v] : parameters) {
    const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParameterSpec& s) { return s.key == k; });
    if (!known) throw ConfigurationError("unknown key '" + k + "' for " + to_string(experiment));
  }
  for (const auto& s : specs) {
    if (s.required && !has(s.key)) throw ConfigurationError("missing required key '" + s.key + "'");
  }
  static const std::set<std::string> integers = {"N", "samples", "layers", "quad-order"};
  static const std::set<std::string> reals = {"q", "alpha", "tau", "Lambda", "omega", "cutoff"};
  for (const auto& [k, v] : parameters) {
    if (v.empty()) continue;
    if (integers.count(k)) get_int(k);
    if (reals.count(k)) get_double(k);
  }
  workers();
  format();
  get_seed();
  if (get_int("quad-order") < 8) throw ConfigurationError("quad-order must be >= 8");
}

bool ExperimentConfig::has(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it != parameters.end()) return !it->second.empty();
  for (const auto& s : parameter_specs(experiment)) {
    if (s.key == key) return !s.default_value.empty();
  }
  return false;
}

std::string ExperimentConfig::get(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it != parameters.end() && !it->second.empty()) return it->second;
  for (const auto& s : parameter_specs(experiment)) {
    if (s.key == key) {
      if (s.default_value.empty()) throw ConfigurationError("missing key '" + key + "'");
      return s.default_value;
    }
  }
  throw ConfigurationError("unknown key '" + key + "' for " + to_string(experiment));
}

double ExperimentConfig::get_double(const std::string& key) const { return to_double(get(key), key); }

long long ExperimentConfig::get_int(const std::string& key) const { return to_int(get(key), key); }

std::uint64_t ExperimentConfig::get_seed() const {
  const std::string s = get("seed");
  try {
    std::size_t pos = 0;
    if (!s.empty() && s[0] == '-') throw std::invalid_argument(s);
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError("invalid seed '" + s + "'");
  }
}

int ExperimentConfig::workers() const {
  const long long w = get_int("workers");
  if (w < 1 || w > 1024) throw ConfigurationError("workers must lie in [1, 1024]");
  return static_cast<int>(w);
}

OutputFormat ExperimentConfig::format() const {
  const std::string f = get("format");
  if (f == "csv") return OutputFormat::Csv;
  if (f == "json") return OutputFormat::Json;
  throw ConfigurationError("format must be csv or json");
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
  const std::vector<double> v = parse_list(get(key));
  if (v.empty()) throw ConfigurationError("empty list for " + key);
  return v;
}

std::vector<double> ExperimentConfig::get_grid(const std::string& key) const { return parse_grid(get(key)); }

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {to_double(parts[0], "grid")};
  if (parts.size() != 3) throw ConfigurationError("grid must look like lo:hi:step, got '" + text + "'");
  const double lo = to_double(parts[0], "grid"), hi = to_double(parts[1], "grid"), step = to_double(parts[2], "grid");
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigurationError("grid needs lo <= hi and step > 0, got '" + text + "'");
  }
  const double count = std::floor((hi - lo) / step + 1e-9) + 1.0;
  if (count > 1e7) throw ConfigurationError("grid too large: '" + text + "'");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) {
    if (p.empty()) throw ConfigurationError("empty entry in list '" + text + "'");
    out.push_back(to_double(p, "list"));
  }
  return out;
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw ConfigurationError("no column named '" + name + "'");
}

std::vector<double> Table::numeric_column(const std::string& name) const {
  const std::size_t k = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const Cell& c = row.at(k);
    if (const auto* i = std::get_if<std::int64_t>(&c)) out.push_back(static_cast<double>(*i));
    else if (const auto* d = std::get_if<double>(&c)) out.push_back(*d);
    else throw ConfigurationError("column '" + name + "' is not numeric");
  }
  return out;
}

Report run_experiment(const ExperimentConfig& config) {
  config.validate();
  Report r;
  switch (config.experiment) {
    case ExperimentKind::PngHeight: r = run_png_height(config); break;
    case ExperimentKind::PngLayers: r = run_png_layers(config); break;
    case ExperimentKind::RmtEdge: r = run_rmt_edge(config); break;
    case ExperimentKind::RmtDyson: r = run_rmt_dyson(config); break;
    case ExperimentKind::DistEval: r = run_dist_eval(config); break;
    case ExperimentKind::DistJoint: r = run_dist_joint(config); break;
    case ExperimentKind::Compare: r = run_compare(config); break;
  }
  r.experiment = config.experiment;
  for (const auto& s : parameter_specs(config.experiment)) {
    if (s.key == "workers" || s.key == "out" || s.key == "format") continue;
    if (config.has(s.key)) r.parameters[s.key] = config.get(s.key);
  }
  return r;
}

namespace {

Json metadata_json(const Report& r) {
  Json meta;
  meta["experiment"] = to_string(r.experiment);
  meta["description"] = r.description;
  meta["version"] = PNGLAB_VERSION;
  meta["parameters"] = r.parameters;
  Json cols = Json::array();
  for (const auto& c : r.table.columns) cols.push_back({{"name", c.name}, {"type", c.type}});
  meta["columns"] = cols;
  Json summary = Json::object();
  for (const auto& [k, v] : r.summary) summary[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  meta["summary"] = summary;
  meta["certified"] = r.certified;
  if (!r.certified) meta["failure"] = r.failure;
  return meta;
}

Cell parse_cell(const std::string& text, const std::string& type, const std::string& col) {
  if (type == "int") return static_cast<std::int64_t>(to_int(text, "column " + col));
  if (type == "float") {
    if (text == "nan") return std::nan("");
    return to_double(text, "column " + col);
  }
  if (type == "string") return text;
  throw ConfigurationError("unknown column type '" + type + "'");
}

std::vector<Column> columns_from(const Json& meta) {
  if (!meta.contains("columns") || !meta["columns"].is_array()) {
    throw ConfigurationError("table metadata lacks a column list");
  }
  std::vector<Column> cols;
  for (const auto& c : meta["columns"]) cols.push_back({c.at("name").get<std::string>(), c.at("type").get<std::string>()});
  return cols;
}

}  // namespace

void write_report(const Report& report, std::ostream& os, OutputFormat format) {
  const Json meta = metadata_json(report);
  if (format == OutputFormat::Csv) {
    os << "# " << meta.dump() << '\n';
    for (std::size_t i = 0; i < report.table.columns.size(); ++i) {
      os << (i ? "," : "") << report.table.columns[i].name;
    }
    os << '\n';
    for (const auto& row : report.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
      os << '\n';
    }
    return;
  }
  Json doc;
  doc["metadata"] = meta;
  Json rows = Json::array();
  for (const auto& row : report.table.rows) {
    Json jr = Json::array();
    for (const auto& c : row) jr.push_back(cell_json(c));
    rows.push_back(std::move(jr));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(1) << '\n';
}

void write_report_file(const Report& report, const std::string& path, OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  write_report(report, out, format);
}

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ConfigurationError("'" + path + "' is empty");

  Table t;
  try {
    if (text[first] == '{') {
      const Json doc = Json::parse(text);
      t.columns = columns_from(doc.at("metadata"));
      for (const auto& jr : doc.at("rows")) {
        if (jr.size() != t.columns.size()) throw ConfigurationError("row length does not match the columns");
        std::vector<Cell> row;
        for (std::size_t i = 0; i < jr.size(); ++i) {
          const auto& type = t.columns[i].type;
          if (jr[i].is_null()) row.emplace_back(std::nan(""));
          else if (type == "int") row.emplace_back(jr[i].get<std::int64_t>());
          else if (type == "float") row.emplace_back(jr[i].get<double>());
          else row.emplace_back(jr[i].get<std::string>());
        }
        t.rows.push_back(std::move(row));
      }
      return t;
    }
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    if (line.rfind("# ", 0) != 0) throw ConfigurationError("'" + path + "': missing '# {metadata}' line");
    t.columns = columns_from(Json::parse(line.substr(2)));
    std::getline(is, line);
    const auto header = split(line, ',');
    if (header.size() != t.columns.size()) throw ConfigurationError("'" + path + "': header does not match metadata");
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] != t.columns[i].name) throw ConfigurationError("'" + path + "': header does not match metadata");
    }
    std::size_t lineno = 2;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto cells = split(line, ',');
      if (cells.size() != t.columns.size()) {
        throw ConfigurationError("'" + path + "' line " + std::to_string(lineno) + ": wrong number of fields");
      }
      std::vector<Cell> row;
      for (std::size_t i = 0; i < cells.size(); ++i) row.push_back(parse_cell(cells[i], t.columns[i].type, t.columns[i].name));
      t.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError("'" + path + "': malformed JSON: " + e.what());
  }
  return t;
}

}  // namespace pnglab
