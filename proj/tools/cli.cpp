#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "imra/besov.hpp"
#include "imra/error.hpp"
#include "imra/filters.hpp"
#include "imra/io.hpp"
#include "imra/ordering.hpp"
#include "imra/scaling.hpp"
#include "imra/transform.hpp"
#include "imra/verify.hpp"

namespace imra::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_exponent(const std::string& text, const char* name) {
  if (text == "inf" || text == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Parameter, std::string(name) + " must be a number or 'inf', got '" + text + "'");
}

json exponent_json(double p) { return p == kInf ? json("inf") : json(p); }

Box parse_box(const std::string& text) {
  std::vector<Interval> axes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorKind::Parameter, "box axis '" + part + "' must look like lo:hi");
    }
    try {
      axes.push_back({std::stoll(part.substr(0, colon)), std::stoll(part.substr(colon + 1))});
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parameter, "box axis '" + part + "' must look like lo:hi");
    }
    if (axes.back().empty()) throw Error(ErrorKind::Parameter, "box axis '" + part + "' is empty");
  }
  if (axes.empty()) throw Error(ErrorKind::Parameter, "empty box");
  return Box(std::move(axes));
}

SampledFunction named_function(const std::string& name, double alpha, double center) {
  if (name == "gaussian") {
    return [](std::span<const double> x) {
      double r2 = 0.0;
      for (const double c : x) r2 += c * c;
      return std::exp(-r2);
    };
  }
  if (name == "bump") {
    return [](std::span<const double> x) {
      double v = 1.0;
      for (const double c : x) {
        const double s = 1.0 - c * c;
        v *= s > 0.0 ? s * s : 0.0;
      }
      return v;
    };
  }
  if (name == "sin-window") {
    return [](std::span<const double> x) {
      double v = 1.0;
      for (const double c : x) {
        const double w = std::abs(c) < 3.0 ? std::pow(std::cos(M_PI * c / 6.0), 2) : 0.0;
        v *= std::sin(c) * w;
      }
      return v;
    };
  }
  if (name == "abs-power") {
    return [alpha, center](std::span<const double> x) {
      double v = 1.0;
      for (const double c : x) v *= std::pow(std::abs(c - center), alpha);
      return v;
    };
  }
  if (name == "constant") return [](std::span<const double>) { return 1.0; };
  if (name == "linear") {
    return [](std::span<const double> x) {
      double v = 0.0;
      for (const double c : x) v += c;
      return v;
    };
  }
  throw Error(ErrorKind::Parameter, "unknown function '" + name +
                                        "' (gaussian, bump, sin-window, abs-power, constant, linear)");
}

FilterBankPtr bank_option(const std::string& id) { return bank_from_id(id); }

struct Options {
  int order = 1;
  std::string custom;
  std::string output;
  std::string input;
  std::string filter = "dd2";
  std::string function = "gaussian";
  std::string box;
  std::string p = "2";
  std::string q = "2";
  int resolution = 4;
  int levels = 1;
  int level = 0;
  int dim = 0;
  int count = 0;
  int verify_shells = -1;
  int quadrature = 0;
  double tau = 0.0;
  double sigma = 1.0;
  double alpha = 0.5;
  double center = 0.0;
  bool wavelet = false;
  bool wavelet_norm = false;
  std::uint64_t seed = 20240601;
};

int gen_filters(const Options& o, std::ostream& out, std::ostream& err) {
  FilterBank bank;
  if (!o.custom.empty()) {
    const auto bytes = read_file(o.custom);
    const std::string text(bytes.begin(), bytes.end());
    FilterBank parsed;
    try {
      parsed = parse_bank(text);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidFilter && e.kind() != ErrorKind::Format) throw;
      err << "imra: " << o.custom << ": " << e.what() << "\n";
      return kValidation;
    }
    const ValidationReport report = custom_bank_validate(parsed.h);
    for (const auto& c : report.checks) {
      out << "# " << (c.passed ? "ok  " : (c.warning_only ? "warn" : "fail")) << " " << c.name
          << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    }
    if (!report.ok()) return kValidation;
    bank = parsed;
  } else {
    bank = derive_bank(dd_scaling_filter(o.order), o.order);
  }
  const std::string text = format_bank(bank);
  if (o.output.empty()) {
    out << text;
  } else {
    write_file(o.output, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  return kOk;
}

int eval_phi(const Options& o, std::ostream& out) {
  const FilterBank bank = derive_bank(dd_scaling_filter(o.order), o.order);
  const DyadicFunctionTable table = o.wavelet ? refine_wavelet(bank, o.resolution) : refine_scaling(bank, o.resolution);
  for (std::int64_t k = table.lo; k <= table.hi; ++k) {
    const Dyadic x = Dyadic::from_parts(k, table.resolution);
    out << x.to_string() << '\t' << num(x.to_double()) << '\t' << num(table.at(k)) << '\n';
  }
  return kOk;
}

int sample(const Options& o, std::ostream& out) {
  const Box box = parse_box(o.box);
  const GridFunction g = sample_grid(named_function(o.function, o.alpha, o.center), o.level, box);
  write_grid(o.output, g);
  out << "wrote " << g.size() << " samples at level " << g.level() << " over " << box.to_string() << "\n";
  return kOk;
}

int decompose_cmd(const Options& o, std::ostream& out) {
  const GridFunction g = read_grid(o.input);
  if (o.dim != 0 && g.dim() != o.dim) {
    std::string msg = "input grid has " + std::to_string(g.dim()) + " axes but --dim " + std::to_string(o.dim) + " was given";
    msg += g.dim() < o.dim ? " (axis " + std::to_string(g.dim()) + " missing)"
                           : " (unexpected axis " + std::to_string(o.dim) + ")";
    throw Error(ErrorKind::Dimension, msg);
  }
  if (o.levels < 1) throw Error(ErrorKind::Parameter, "--levels must be at least 1");
  const WaveletPyramid pyr = decompose(g, g.level() - o.levels, bank_option(o.filter));
  write_pyramid(o.output, pyr);
  out << "levels " << pyr.j0 << ".." << pyr.J << ", " << pyr.details.size() << " detail channels, "
      << pyr.detail_count() << " coefficients\n";
  return kOk;
}

int reconstruct_cmd(const Options& o, std::ostream& out) {
  const GridFunction g = reconstruct(read_pyramid(o.input));
  write_grid(o.output, g);
  out << "wrote " << g.size() << " samples at level " << g.level() << "\n";
  return kOk;
}

int threshold_cmd(const Options& o, std::ostream& out) {
  const ThresholdResult r = threshold(read_pyramid(o.input), o.tau);
  write_pyramid(o.output, r.pyramid);
  out << "kept\t" << r.kept << "\ndropped\t" << r.dropped << "\ndropped_l1\t" << num(r.dropped_l1) << "\n";
  return kOk;
}

int besov_cmd(const Options& o, std::ostream& out) {
  const WaveletPyramid pyr = read_pyramid(o.input);
  BesovParams params{o.sigma, parse_exponent(o.p, "--p"), parse_exponent(o.q, "--q"), pyr.j0};
  const NormReport r = o.wavelet_norm ? wavelet_norm(pyr, params, o.quadrature) : coeff_norm(pyr, params);
  json doc;
  doc["norm"] = o.wavelet_norm ? "wavelet" : "coefficient";
  doc["sigma"] = params.sigma;
  doc["p"] = exponent_json(params.p);
  doc["q"] = exponent_json(params.q);
  doc["j0"] = pyr.j0;
  doc["J"] = pyr.J;
  doc["coarse"] = r.coarse;
  json levels = json::object();
  for (const auto& [j, t] : r.level_terms) levels[std::to_string(j)] = t;
  doc["levels"] = levels;
  doc["aggregate"] = r.aggregate;
  doc["total"] = r.total;
  doc["tail_estimate"] = r.tail_estimate ? json(*r.tail_estimate) : json(nullptr);
  doc["flags"] = r.flags;
  out << doc.dump(2) << "\n";
  return kOk;
}

int holder_cmd(const Options& o, std::ostream& out) {
  const GridFunction g = read_grid(o.input);
  const HolderEstimate e = holder_estimate(g, g.level() - o.levels, bank_option(o.filter));
  out << "sigma\t" << (e.infinite ? std::string("inf") : num(e.sigma)) << "\n";
  out << "# j\t-log2 max|d_j|\n";
  for (const auto& [j, y] : e.points) out << j << '\t' << num(y) << '\n';
  return kOk;
}

int ordering_cmd(const Options& o, std::ostream& out) {
  if (o.verify_shells >= 0) {
    const OrderingReport r = verify_ordering(o.dim, o.verify_shells);
    out << "dim\t" << r.dim << "\nshells\t" << r.shells << "\npoints\t" << r.points << "\n";
    auto line = [&](const char* name, bool ok) { out << name << '\t' << (ok ? "pass" : "fail") << '\n'; };
    line("bijection", r.bijection);
    line("neighbours", r.neighbours);
    line("cubes", r.cubes);
    line("endpoints", r.endpoints);
    line("shell_conditions", r.shell_conditions);
    if (r.first_violation) {
      out << "first_violation\t" << r.first_violation->index << '\t' << r.first_violation->check << '\t'
          << r.first_violation->message << '\n';
    }
    return r.ok() ? kOk : kValidation;
  }
  CubeOrdering it(o.dim);
  for (int i = 0; i < o.count; ++i) {
    const std::uint64_t k = it.index();
    const LatticePoint p = it.next();
    out << k << '\t';
    for (std::size_t l = 0; l < p.size(); ++l) out << (l ? "," : "") << p[l];
    out << '\n';
  }
  return kOk;
}

int verify_cmd(const Options& o, std::ostream& out) {
  VerifyOptions vo;
  if (o.dim != 0) vo.dim = o.dim;
  if (o.order != 0) vo.order = o.order;
  vo.seed = o.seed;
  std::size_t failed = 0;
  std::size_t total = 0;
  run_verify(vo, [&](const CheckResult& r) {
    out << format_check(r) << '\n' << std::flush;
    ++total;
    if (!r.passed()) ++failed;
  });
  out << (failed == 0 ? "all " + std::to_string(total) + " checks passed"
                      : std::to_string(failed) + " of " + std::to_string(total) + " checks failed")
      << '\n';
  return failed == 0 ? kOk : kValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpolating tensor-product wavelet toolkit", "imra"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-filters", "Print a Deslauriers-Dubuc filter bank, or check a custom mask");
  gen->add_option("--order,-L", o.order, "Deslauriers-Dubuc order (1..16)");
  gen->add_option("--custom", o.custom, "Filter file with at least an `h` line")->check(CLI::ExistingFile);
  gen->add_option("--output,-o", o.output, "Write the bank here instead of stdout");

  auto* eval = app.add_subcommand("eval-phi", "Tabulate phi (or psi) at k / 2^r as TSV: x, decimal x, value");
  eval->add_option("--order,-L", o.order, "Deslauriers-Dubuc order")->required();
  eval->add_option("--resolution,-r", o.resolution, "Dyadic resolution r")->required();
  eval->add_flag("--psi,--wavelet", o.wavelet, "Tabulate the mother wavelet instead");

  auto* samp = app.add_subcommand("sample", "Sample a built-in test function onto a grid file");
  samp->add_option("--function,-f", o.function, "gaussian, bump, sin-window, abs-power, constant, linear");
  samp->add_option("--level,-j", o.level, "Grid level j (samples at lambda / 2^j)")->required();
  samp->add_option("--box,-b", o.box, "Lattice box lo:hi[,lo:hi...]")->required();
  samp->add_option("--alpha", o.alpha, "Exponent for abs-power");
  samp->add_option("--center", o.center, "Singularity location for abs-power");
  samp->add_option("--output,-o", o.output, "Grid file")->required();

  auto* dec = app.add_subcommand("decompose", "Forward transform of a grid file into a pyramid directory");
  dec->add_option("--input,-i", o.input, "Grid file")->required();
  dec->add_option("--filter", o.filter, "Filter bank id, e.g. dd2");
  dec->add_option("--levels,-k", o.levels, "Number of levels")->required();
  dec->add_option("--dim", o.dim, "Expected grid dimension");
  dec->add_option("--output,-o", o.output, "Pyramid directory")->required();

  auto* rec = app.add_subcommand("reconstruct", "Inverse transform of a pyramid directory");
  rec->add_option("--input,-i", o.input, "Pyramid directory")->required();
  rec->add_option("--output,-o", o.output, "Grid file")->required();

  auto* thr = app.add_subcommand("threshold", "Zero detail coefficients with |c| <= tau");
  thr->add_option("--input,-i", o.input, "Pyramid directory")->required();
  thr->add_option("--tau", o.tau, "Threshold")->required()->check(CLI::NonNegativeNumber);
  thr->add_option("--output,-o", o.output, "Pyramid directory")->required();

  auto* bes = app.add_subcommand("besov-norm", "Besov sequence norm of a pyramid as JSON");
  bes->add_option("--input,-i", o.input, "Pyramid directory")->required();
  bes->add_option("--sigma", o.sigma, "Smoothness sigma > 0")->required();
  bes->add_option("--p", o.p, "Integrability p in [1, inf]");
  bes->add_option("--q", o.q, "Summability q in [1, inf]");
  bes->add_flag("--wavelet", o.wavelet_norm, "Use the projection (wavelet) norm instead of coefficients");
  bes->add_option("--quadrature", o.quadrature, "Extra refinement levels for the wavelet-norm quadrature");

  auto* hol = app.add_subcommand("holder-est", "Estimate the Hoelder exponent from detail decay");
  hol->add_option("--input,-i", o.input, "Grid file")->required();
  hol->add_option("--levels,-k", o.levels, "Number of detail levels (>= 3)")->required();
  hol->add_option("--filter", o.filter, "Filter bank id");

  auto* ord = app.add_subcommand("ordering", "Neighbour-preserving enumeration of Z^n");
  ord->add_option("--dim,-n", o.dim, "Dimension (1..4)")->required();
  auto* count = ord->add_option("--count,-c", o.count, "Print the first m points");
  auto* ver = ord->add_option("--verify", o.verify_shells, "Verify the first K shells");
  count->excludes(ver);

  auto* vfy = app.add_subcommand("verify", "Run the identity suites");
  vfy->add_option("--dim,-n", o.dim, "Restrict to one dimension");
  vfy->add_option("--order,-L", o.order, "Restrict to one Deslauriers-Dubuc order");
  vfy->add_option("--seed", o.seed, "Random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*gen) return gen_filters(o, out, err);
    if (*eval) return eval_phi(o, out);
    if (*samp) return sample(o, out);
    if (*dec) return decompose_cmd(o, out);
    if (*rec) return reconstruct_cmd(o, out);
    if (*thr) return threshold_cmd(o, out);
    if (*bes) return besov_cmd(o, out);
    if (*hol) return holder_cmd(o, out);
    if (*ord) return ordering_cmd(o, out);
    if (*vfy) {
      if (vfy->count("--order") == 0) o.order = 0;
      return verify_cmd(o, out);
    }
  } catch (const Error& e) {
    err << "imra: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.is_io() ? kIo : kValidation;
  } catch (const std::exception& e) {
    err << "imra: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}

}  // namespace imra::cli
