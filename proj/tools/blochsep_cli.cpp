// blochsep: correlation-tensor decomposition, norm bounds and m-separability
// exclusion for multipartite states. Reports are JSON; see README.md.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <blochsep/blochsep.hpp>
#include <blochsep/json_io.hpp>

namespace {

using blochsep::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;
constexpr const char* kToleranceEnv = "BLOCHSEP_TOLERANCE";

struct CommonOptions {
  std::string input;
  std::string spec;
  std::string output;
  std::optional<double> tolerance;
};

void add_common(CLI::App& cmd, CommonOptions& opts, bool needs_input) {
  if (needs_input) {
    auto* in = cmd.add_option("--input", opts.input, "JSON input file ('-' for stdin)");
    auto* sp = cmd.add_option("--spec", opts.spec, "inline JSON input");
    in->excludes(sp);
  }
  cmd.add_option("--output", opts.output, "write the report here instead of stdout");
  cmd.add_option("--tolerance", opts.tolerance,
                 std::string("state validation tolerance (overrides ") + kToleranceEnv + ")");
}

blochsep::Tolerances tolerances(const CommonOptions& opts) {
  blochsep::Tolerances tol;
  std::optional<double> t = opts.tolerance;
  if (!t) {
    if (const char* env = std::getenv(kToleranceEnv)) {
      try {
        t = std::stod(env);
      } catch (const std::exception&) {
        throw blochsep::DomainError(std::string(kToleranceEnv) + " is not a number");
      }
    }
  }
  if (t) {
    if (!(*t > 0.0)) throw blochsep::DomainError("tolerance must be positive");
    tol.hermitian = *t;
    tol.trace = *t;
    tol.psd_floor = std::max(*t, tol.psd_floor);
  }
  return tol;
}

Json read_input(const CommonOptions& opts) {
  std::string text;
  if (!opts.spec.empty()) {
    text = opts.spec;
  } else if (opts.input.empty() || opts.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(opts.input);
    if (!in) throw blochsep::DomainError("cannot open input file " + opts.input);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return Json::parse(text);
}

void emit(const CommonOptions& opts, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw blochsep::DomainError("cannot open output file " + opts.output);
  out << text;
}

int fail(const std::string& kind, const std::string& message, Json extra = Json::object()) {
  Json err;
  err["kind"] = kind;
  err["message"] = message;
  for (auto& [k, v] : extra.items()) err[k] = v;
  Json doc;
  doc["error"] = std::move(err);
  std::cout << doc.dump(2) << "\n";
  return kExitInvalid;
}

std::vector<long long> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size())
      throw blochsep::DomainError(what + " entry '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw blochsep::DomainError(what + " list is empty");
  return out;
}

std::vector<std::size_t> parse_subset(const std::string& text, std::size_t parties) {
  std::vector<std::size_t> out;
  for (long long v : parse_int_list(text, "subset")) {
    if (v < 1 || static_cast<std::size_t>(v) > parties)
      throw blochsep::DomainError("subset entry " + std::to_string(v) + " out of range 1.." +
                                  std::to_string(parties));
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

blochsep::io::ModeSelection parse_mode(const std::string& mode) {
  if (mode == "contiguous") return {true, false};
  if (mode == "max") return {false, true};
  return {true, true};
}

// --- examples ---------------------------------------------------------------

struct ExpectedThreshold {
  std::vector<int> shape;
  double x_star;
  bool vacuous;
};

struct ReferenceCase {
  blochsep::StateFamily family;
  double coefficient;
  std::vector<ExpectedThreshold> thresholds;  // contiguous mode
  std::vector<double> norm_points;
  std::optional<std::string> required_note;
};

ReferenceCase reference_case(int id) {
  const double r5 = std::sqrt(5.0), r15 = std::sqrt(15.0), r30 = std::sqrt(30.0);
  if (id == 1) {
    return {blochsep::ghz_w_mixture_family(),
            20.0,
            {{{1, 1, 1, 1, 1}, r5 / 10, false},
             {{1, 1, 1, 2}, r15 / 10, false},
             {{1, 1, 3}, r5 / 5, false},
             {{1, 2, 2}, 3 * r5 / 10, true},
             {{1, 4}, 3 * r5 / 10, true},
             {{2, 3}, r15 / 5, true}},
            {0.1, 0.25, 0.4, 0.49},
            std::nullopt};
  }
  if (id == 2) {
    return {blochsep::heterogeneous_cat_family(),
            6.0,
            {{{1, 1, 1, 1}, 2 * r30 / 15, false},
             {{1, 1, 2}, r30 / 6, false},
             {{1, 3}, std::sqrt(52.0 / 45.0), true},
             {{2, 2}, r30 / 4, true}},
            {0.1, 0.25, 0.5, 0.8, 1.0},
            std::string("sqrt(263)/15")};
  }
  throw blochsep::DomainError("unknown example id " + std::to_string(id) + " (expected 1 or 2)");
}

Json shapes_json(const std::vector<blochsep::PartitionShape>& shapes) {
  Json out = Json::array();
  for (const auto& s : shapes) out.push_back(s.to_string());
  return out;
}

int run_examples(int id, const CommonOptions& opts) {
  const ReferenceCase ref = reference_case(id);
  const auto& family = ref.family;
  const auto table = blochsep::noise_thresholds(family);

  Json checks = Json::array();
  bool all_pass = true;
  auto check = [&](const std::string& name, bool pass, Json detail = nullptr) {
    Json c;
    c["name"] = name;
    c["pass"] = pass;
    if (!detail.is_null()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
    all_pass = all_pass && pass;
  };

  check("coefficient", std::abs(table.coefficient - ref.coefficient) <= 1e-9 * ref.coefficient,
        table.coefficient);
  for (double x : ref.norm_points) {
    const double n = blochsep::full_correlation_tensor(family.at(x)).norm_sq();
    const double expect = ref.coefficient * x * x;
    check("norm_sq at x=" + blochsep::detail::format_real(x), std::abs(n - expect) <= 1e-9 * expect, n);
  }
  for (const auto& e : ref.thresholds) {
    const blochsep::PartitionShape shape(e.shape);
    const auto* row = table.find(shape);
    const bool ok = row && row->contiguous.x_star &&
                    std::abs(*row->contiguous.x_star - e.x_star) <= 1e-12 &&
                    row->contiguous.vacuous == e.vacuous;
    check("threshold " + shape.to_string(), ok,
          row && row->contiguous.x_star ? Json(*row->contiguous.x_star) : Json(nullptr));
  }
  if (ref.required_note) {
    bool found = false;
    for (const auto& n : table.notes) found = found || n.find(*ref.required_note) != std::string::npos;
    check("discrepancy note " + *ref.required_note, found);
  }

  // Sweep: every classification must agree with the threshold table.
  Json sweep = Json::array();
  const double top = std::min(family.x_max(), 1.0);
  const int steps = 50;
  bool sweep_ok = true;
  for (int i = 0; i <= steps; ++i) {
    const double x = top * i / steps;
    const auto report = blochsep::classify(family.at(x));
    for (const auto& row : table.rows) {
      const auto* r = &row;
      for (const auto& sr : report.rows) {
        if (!(sr.shape == r->shape)) continue;
        auto agrees = [&](const blochsep::ThresholdEntry& e, bool excluded) {
          if (!e.x_star) return !excluded;
          if (std::abs(x - *e.x_star) < 1e-6) return true;
          return excluded == (x > *e.x_star);
        };
        sweep_ok = sweep_ok && agrees(r->contiguous, sr.excluded_contiguous) &&
                   agrees(r->max, sr.excluded_any);
      }
    }
    Json point;
    point["x"] = x;
    point["norm_sq"] = report.norm_sq;
    point["excluded_contiguous"] = shapes_json(report.excluded(blochsep::BoundMode::contiguous));
    point["excluded_any"] = shapes_json(report.excluded(blochsep::BoundMode::max_over_assignments));
    sweep.push_back(std::move(point));
  }
  check("sweep agrees with thresholds", sweep_ok);

  Json doc;
  doc["id"] = id;
  doc["dims"] = family.profile().dims();
  doc["thresholds"] = blochsep::io::to_json(table, family.profile());
  doc["sweep"] = std::move(sweep);
  doc["checks"] = std::move(checks);
  doc["pass"] = all_pass;
  emit(opts, doc);
  return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-tensor norms, bounds and m-separability exclusion"};
  app.require_subcommand(1);

  CommonOptions decompose_opts, reconstruct_opts, bounds_opts, classify_opts, thresholds_opts,
      examples_opts, generators_opts;

  auto* decompose = app.add_subcommand("decompose", "correlation tensors of a state");
  add_common(*decompose, decompose_opts, true);
  std::string subset_text;
  decompose->add_option("--subset", subset_text, "comma-separated 1-based parties (default: all subsets)");

  auto* reconstruct = app.add_subcommand("reconstruct", "rebuild a density matrix from a decompose report");
  add_common(*reconstruct, reconstruct_opts, true);

  auto* bounds = app.add_subcommand("bounds", "full-system bound and every block factor for a dims profile");
  add_common(*bounds, bounds_opts, false);
  std::string dims_text;
  bounds->add_option("--dims", dims_text, "comma-separated local dimensions")->required();

  auto* classify = app.add_subcommand("classify", "exclusion verdicts for every partition shape");
  add_common(*classify, classify_opts, true);
  std::string classify_mode = "both";
  classify->add_option("--mode", classify_mode, "contiguous|max|both")
      ->check(CLI::IsMember({"contiguous", "max", "both"}));

  auto* thresholds = app.add_subcommand("thresholds", "noise thresholds of a white-noise family");
  add_common(*thresholds, thresholds_opts, true);
  std::string thresholds_mode = "both";
  thresholds->add_option("--mode", thresholds_mode, "contiguous|max|both")
      ->check(CLI::IsMember({"contiguous", "max", "both"}));

  auto* examples = app.add_subcommand("examples", "rebuild and verify the reference families");
  add_common(*examples, examples_opts, false);
  int example_id = 0;
  examples->add_option("--id", example_id, "1 (five-qubit GHZ/W mixture) or 2 (2x3x4x5 cat state)")
      ->required();

  auto* generators = app.add_subcommand("generators", "dump the SU(d) generators");
  add_common(*generators, generators_opts, false);
  int generator_dim = 2;
  generators->add_option("--dim", generator_dim, "local dimension")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what());
  }

  try {
    if (*decompose) {
      const auto state = blochsep::io::state_from_json(read_input(decompose_opts), tolerances(decompose_opts));
      Json doc;
      if (subset_text.empty()) {
        doc = blochsep::io::tensors_to_json(state.profile(), blochsep::all_tensors(state));
      } else {
        const auto subset = parse_subset(subset_text, state.parties());
        blochsep::TensorMap one;
        auto t = blochsep::correlation_tensor(state, subset);
        one.emplace(t.subset(), std::move(t));
        doc = blochsep::io::tensors_to_json(state.profile(), one);
      }
      emit(decompose_opts, doc);
    } else if (*reconstruct) {
      const Json doc = read_input(reconstruct_opts);
      const auto profile = blochsep::io::dims_from_json(doc);
      const auto state = blochsep::reconstruct(blochsep::io::tensors_from_json(doc), profile,
                                               tolerances(reconstruct_opts));
      emit(reconstruct_opts, blochsep::io::state_to_json(state));
    } else if (*bounds) {
      tolerances(bounds_opts);
      std::vector<int> dims;
      for (long long v : parse_int_list(dims_text, "dims")) {
        if (v < 2 || v > 1 << 14) throw blochsep::DomainError("local dimension must be at least 2");
        dims.push_back(static_cast<int>(v));
      }
      emit(bounds_opts, blochsep::io::bounds_report(blochsep::DimsProfile(dims)));
    } else if (*classify) {
      const auto state = blochsep::io::state_from_json(read_input(classify_opts), tolerances(classify_opts));
      emit(classify_opts, blochsep::io::to_json(blochsep::classify(state), parse_mode(classify_mode)));
    } else if (*thresholds) {
      const auto family = blochsep::io::family_from_json(read_input(thresholds_opts), tolerances(thresholds_opts));
      emit(thresholds_opts, blochsep::io::to_json(blochsep::noise_thresholds(family), family.profile(),
                                                  parse_mode(thresholds_mode)));
    } else if (*examples) {
      tolerances(examples_opts);
      return run_examples(example_id, examples_opts);
    } else if (*generators) {
      tolerances(generators_opts);
      emit(generators_opts, blochsep::io::generators_to_json(blochsep::build_generators(generator_dim)));
    }
  } catch (const Json::parse_error& e) {
    Json extra;
    extra["byte"] = e.byte;
    return fail("malformed_json", e.what(), extra);
  } catch (const Json::exception& e) {
    return fail("schema", e.what());
  } catch (const blochsep::InvariantError& e) {
    Json extra;
    extra["invariant"] = e.invariant();
    return fail("invalid_state", e.what(), extra);
  } catch (const blochsep::ShapeError& e) {
    return fail("shape", e.what());
  } catch (const blochsep::ResourceError& e) {
    return fail("resource", e.what());
  } catch (const blochsep::DomainError& e) {
    return fail("domain", e.what());
  }
  return kExitOk;
}
