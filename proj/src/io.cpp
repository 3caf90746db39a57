#include "grades/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace grades::io {
namespace {

using nlohmann::json;

json vector_json(const Signal<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const MeasurementMatrix<double>& phi) {
  json out = json::array();
  for (Index i = 0; i < phi.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < phi.cols(); ++j) row.push_back(phi(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Signal<double> vector_from(const json& arr, const char* what) {
  if (!arr.is_array()) throw FormatError(std::string(what) + " must be an array");
  Signal<double> v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw FormatError(std::string(what) + " has a non-numeric entry");
    v(static_cast<Index>(i)) = arr[i].get<double>();
  }
  return v;
}

MeasurementMatrix<double> matrix_from(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw FormatError("phi must be a nonempty array of rows");
  const auto rows = static_cast<Index>(arr.size());
  const auto cols = static_cast<Index>(arr[0].size());
  MeasurementMatrix<double> phi(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto row = vector_from(arr[static_cast<std::size_t>(i)], "phi row");
    if (row.size() != cols) throw FormatError("phi rows have unequal lengths");
    phi.row(i) = row.transpose();
  }
  return phi;
}

json support_json(const std::vector<Index>& support) {
  json out = json::array();
  for (const Index i : support) out.push_back(i);
  return out;
}

std::vector<Index> support_from(const json& arr) {
  std::vector<Index> out;
  for (const auto& v : arr) out.push_back(v.get<Index>());
  return out;
}

void check_header(const json& doc, const char* kind) {
  if (!doc.is_object()) throw FormatError("document is not a JSON object");
  if (doc.value("schema_version", 0) != kSchemaVersion) {
    throw FormatError("unsupported schema_version (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  if (doc.value("kind", std::string{}) != kind) {
    throw FormatError(std::string("expected a document of kind '") + kind + "'");
  }
}

SolveStatus status_from(const std::string& name) {
  for (auto s : {SolveStatus::Converged, SolveStatus::IterationCapReached,
                 SolveStatus::ConditionViolated}) {
    if (name == to_string(s)) return s;
  }
  throw FormatError("unknown solve status '" + name + "'");
}

// Runs a parser, turning library and validation errors into FormatError.
template <typename F>
auto parsing(F&& parse) {
  try {
    return parse();
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  } catch (const ContractViolation& e) {
    throw FormatError(e.what());
  }
}

template <typename F>
auto reading(const std::filesystem::path& path, F&& parse) {
  const json doc = read_json_file(path);
  try {
    return parse(doc);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace

BoundsRecord make_bounds_record(const RipBounds<double>& bounds, double y_norm_sq,
                                double reference_eps) {
  BoundsRecord record{bounds, delta_from_bounds(bounds), check_convergence_condition(bounds),
                      reference_eps, y_norm_sq, std::nullopt};
  if (record.condition_ok) {
    record.predicted_iterations =
        y_norm_sq > 0 ? iteration_bound(y_norm_sq, reference_eps, bounds) : 0;
  }
  return record;
}

json to_json(const InstanceRecord& record) {
  const auto& inst = record.instance;
  json doc = {{"schema_version", kSchemaVersion},
              {"kind", "instance"},
              {"m", inst.rows()},
              {"n", inst.cols()}};
  doc["sparsity"] = inst.sparsity() ? json(*inst.sparsity()) : json(nullptr);
  doc["phi"] = matrix_json(inst.phi());
  doc["y"] = vector_json(inst.y());
  doc["truth"] = inst.truth() ? vector_json(*inst.truth()) : json(nullptr);
  if (record.generation) {
    const auto& g = *record.generation;
    doc["generation"] = {{"ensemble", g.ensemble},
                         {"amplitude", g.amplitude},
                         {"seed", g.seed},
                         {"matrix_seed", g.matrix_seed},
                         {"signal_seed", g.signal_seed}};
  } else {
    doc["generation"] = nullptr;
  }
  return doc;
}

json to_json(const BoundsRecord& record) {
  const auto& b = record.bounds;
  json provenance;
  if (const auto* sampled = std::get_if<SampledProvenance>(&b.provenance())) {
    provenance = {{"mode", "sampled"}, {"trials", sampled->trials}, {"seed", sampled->seed}};
  } else {
    provenance = {{"mode", "exact"}};
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"kind", "rip_bounds"},
              {"level", b.sparsity()},
              {"alpha", b.alpha()},
              {"beta", b.beta()},
              {"provenance", provenance},
              {"alpha_support", support_json(b.alpha_support())},
              {"beta_support", support_json(b.beta_support())},
              {"delta", record.delta},
              {"condition_ok", record.condition_ok},
              {"reference_eps", record.reference_eps},
              {"y_norm_sq", record.y_norm_sq}};
  doc["predicted_iterations"] =
      record.predicted_iterations ? json(*record.predicted_iterations) : json(nullptr);
  return doc;
}

json to_json(const SolveRecord& record) {
  const auto& r = record.result;
  json trace = json::array();
  for (double f : r.trace) trace.push_back(f);
  json doc = {{"schema_version", kSchemaVersion},
              {"kind", "solve_result"},
              {"status", to_string(r.status)},
              {"mode", record.mode},
              {"gamma", record.gamma},
              {"eps", record.eps},
              {"iterations", r.iterations},
              {"reached_target", r.reached_target},
              {"final_objective", r.final_objective()},
              {"x", vector_json(r.x)},
              {"trace", trace}};
  doc["predicted_bound"] = r.predicted_bound ? json(*r.predicted_bound) : json(nullptr);
  doc["recovery_error"] = record.recovery_error ? json(*record.recovery_error) : json(nullptr);
  return doc;
}

InstanceRecord instance_from_json(const json& doc) {
  return parsing([&] {
    check_header(doc, "instance");
    std::optional<Signal<double>> truth;
    if (!doc.at("truth").is_null()) truth = vector_from(doc.at("truth"), "truth");
    std::optional<Index> sparsity;
    if (!doc.at("sparsity").is_null()) sparsity = doc.at("sparsity").get<Index>();
    std::optional<GenerationInfo> generation;
    if (const auto it = doc.find("generation"); it != doc.end() && !it->is_null()) {
      generation = GenerationInfo{it->at("ensemble").get<std::string>(),
                                  it->at("amplitude").get<std::string>(),
                                  it->at("seed").get<std::uint64_t>(),
                                  it->at("matrix_seed").get<std::uint64_t>(),
                                  it->at("signal_seed").get<std::uint64_t>()};
    }
    return InstanceRecord{ProblemInstance<double>(matrix_from(doc.at("phi")),
                                                  vector_from(doc.at("y"), "y"),
                                                  std::move(truth), sparsity),
                          std::move(generation)};
  });
}

BoundsRecord bounds_from_json(const json& doc) {
  return parsing([&] {
    check_header(doc, "rip_bounds");
    const auto& prov = doc.at("provenance");
    Provenance provenance = ExactProvenance{};
    const auto mode = prov.at("mode").get<std::string>();
    if (mode == "sampled") {
      provenance = SampledProvenance{prov.at("trials").get<std::uint64_t>(),
                                     prov.at("seed").get<std::uint64_t>()};
    } else if (mode != "exact") {
      throw FormatError("unknown provenance mode '" + mode + "'");
    }
    RipBounds<double> bounds(doc.at("alpha").get<double>(), doc.at("beta").get<double>(),
                             doc.at("level").get<Index>(), provenance,
                             support_from(doc.at("alpha_support")),
                             support_from(doc.at("beta_support")));
    std::optional<std::uint64_t> predicted;
    if (!doc.at("predicted_iterations").is_null()) {
      predicted = doc.at("predicted_iterations").get<std::uint64_t>();
    }
    return BoundsRecord{std::move(bounds), doc.at("delta").get<double>(),
                        doc.at("condition_ok").get<bool>(),
                        doc.at("reference_eps").get<double>(),
                        doc.at("y_norm_sq").get<double>(), predicted};
  });
}

SolveRecord solve_from_json(const json& doc) {
  return parsing([&] {
    check_header(doc, "solve_result");
    SolveRecord record;
    auto& r = record.result;
    r.x = vector_from(doc.at("x"), "x");
    for (const auto& f : doc.at("trace")) r.trace.push_back(f.get<double>());
    if (r.trace.empty()) throw FormatError("trace must not be empty");
    r.status = status_from(doc.at("status").get<std::string>());
    r.iterations = doc.at("iterations").get<std::uint64_t>();
    if (r.trace.size() != r.iterations + 1) {
      throw FormatError("trace length must be iterations + 1");
    }
    r.reached_target = doc.at("reached_target").get<bool>();
    if (!doc.at("predicted_bound").is_null()) {
      r.predicted_bound = doc.at("predicted_bound").get<std::uint64_t>();
    }
    record.mode = doc.at("mode").get<std::string>();
    record.gamma = doc.at("gamma").get<double>();
    record.eps = doc.at("eps").get<double>();
    if (!doc.at("recovery_error").is_null()) {
      record.recovery_error = doc.at("recovery_error").get<double>();
    }
    return record;
  });
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

json read_json_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

InstanceRecord read_instance(const std::filesystem::path& path) {
  return reading(path, instance_from_json);
}

BoundsRecord read_bounds(const std::filesystem::path& path) {
  return reading(path, bounds_from_json);
}

SolveRecord read_solve(const std::filesystem::path& path) {
  return reading(path, solve_from_json);
}

std::string trace_csv(const std::vector<double>& trace) {
  std::string out = "iteration,objective\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += format_double(trace[t]);
    out += '\n';
  }
  return out;
}

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::logic_error("format_double: buffer too small");
  return std::string(buf, end);
}

}  // namespace grades::io
