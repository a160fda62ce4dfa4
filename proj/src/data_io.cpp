#include "eigml/data_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "eigml/errors.hpp"

namespace eigml::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kRatingsHeader = "user,item,value";
constexpr std::string_view kArchiveFormat = "eigml-model";

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading.");
  }
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing.");
  }
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'.");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void parse_fail(const fs::path& path, std::size_t line_no, const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

double parse_real(std::string_view field, const fs::path& path, std::size_t line_no) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    parse_fail(path, line_no, "invalid number '" + std::string(field) + "'");
  }
  return value;
}

std::int64_t parse_index(std::string_view field, const fs::path& path, std::size_t line_no,
                         std::string_view name) {
  std::int64_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || value < 0) {
    parse_fail(path, line_no,
               "invalid " + std::string(name) + " index '" + std::string(field) +
                   "' (expected a non-negative integer)");
  }
  return value;
}

// Reads every line; a single trailing newline does not produce an extra row.
std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(std::move(line));
  }
  if (in.bad()) {
    throw IoError("failed reading '" + path.string() + "'.");
  }
  return lines;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

json matrix_to_json(const Matrix& m) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return json{{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

json vector_to_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

const json& field(const json& payload, const char* key) {
  const auto it = payload.find(key);
  if (it == payload.end()) {
    throw FormatError(std::string("model archive is missing field '") + key + "'.");
  }
  return *it;
}

double scalar_field(const json& payload, const char* key) {
  const json& f = field(payload, key);
  if (!f.is_array() || f.size() != 1 || !f[0].is_number()) {
    throw FormatError(std::string("field '") + key + "' must be a one-element numeric array.");
  }
  return f[0].get<double>();
}

template <typename Int>
Int int_field(const json& payload, const char* key) {
  const json& f = field(payload, key);
  if (!f.is_array() || f.size() != 1 || !f[0].is_number_integer()) {
    throw FormatError(std::string("field '") + key + "' must be a one-element integer array.");
  }
  return f[0].get<Int>();
}

std::vector<double> doubles(const json& arr, const char* key) {
  if (!arr.is_array()) {
    throw FormatError(std::string("field '") + key + "' must be an array.");
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw FormatError(std::string("field '") + key + "' contains a non-numeric entry.");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Vector vector_field(const json& payload, const char* key) {
  const std::vector<double> data = doubles(field(payload, key), key);
  return Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(data.size()));
}

Matrix matrix_field(const json& payload, const char* key) {
  const json& f = field(payload, key);
  if (!f.is_object() || !f.contains("shape") || !f.contains("data") || !f["shape"].is_array() ||
      f["shape"].size() != 2) {
    throw FormatError(std::string("field '") + key + "' must be {shape: [r, c], data: [...]}.");
  }
  const auto rows = f["shape"][0].get<Eigen::Index>();
  const auto cols = f["shape"][1].get<Eigen::Index>();
  const std::vector<double> data = doubles(f["data"], key);
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw FormatError(std::string("field '") + key + "' has data inconsistent with its shape.");
  }
  return Eigen::Map<const Matrix>(data.data(), rows, cols);
}

void write_archive(ModelKind kind, json payload, const fs::path& path) {
  const json doc{{"format", kArchiveFormat},
                 {"kind", to_string(kind)},
                 {"version", kArchiveVersion},
                 {"payload", std::move(payload)}};
  std::ofstream out = open_output(path);
  out << doc.dump(1) << '\n';
  finish_output(out, path);
}

json read_archive(const fs::path& path) {
  std::ifstream in = open_input(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path.string() + "' is not a model archive: " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kArchiveFormat) {
    throw FormatError("'" + path.string() + "' is not an eigml model archive.");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw FormatError("model archive has no version.");
  }
  const int version = doc["version"].get<int>();
  if (version != kArchiveVersion) {
    throw FormatError("unsupported model archive version " + std::to_string(version) +
                      " (expected " + std::to_string(kArchiveVersion) + ").");
  }
  if (!doc.contains("payload") || !doc["payload"].is_object()) {
    throw FormatError("model archive has no payload.");
  }
  return doc;
}

ModelKind kind_of(const json& doc) {
  const std::string kind = doc.value("kind", "");
  if (kind == "kernel_ridge") return ModelKind::kernel_ridge;
  if (kind == "mf_sgd") return ModelKind::mf_sgd;
  throw FormatError("unknown model kind '" + kind + "'.");
}

void expect_kind(const json& doc, ModelKind expected) {
  const ModelKind actual = kind_of(doc);
  if (actual != expected) {
    throw FormatError("model kind mismatch: archive holds '" + to_string(actual) +
                      "' but '" + to_string(expected) + "' was expected.");
  }
}

}  // namespace

std::vector<Rating> load_ratings(const fs::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || trim(lines.front()) != kRatingsHeader) {
    throw ParseError(path.string() + ":1: expected header '" + std::string(kRatingsHeader) + "'");
  }

  std::vector<Rating> ratings;
  ratings.reserve(lines.size() - 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    const auto fields = split_fields(lines[k]);
    if (fields.size() != 3) {
      parse_fail(path, line_no, "expected 3 fields, found " + std::to_string(fields.size()));
    }
    ratings.push_back({parse_index(fields[0], path, line_no, "user"),
                       parse_index(fields[1], path, line_no, "item"),
                       parse_real(fields[2], path, line_no)});
  }
  return ratings;
}

void save_ratings(const fs::path& path, const std::vector<Rating>& ratings) {
  std::ofstream out = open_output(path);
  out << kRatingsHeader << '\n';
  for (const auto& r : ratings) {
    out << r.user << ',' << r.item << ',' << format_double(r.value) << '\n';
  }
  finish_output(out, path);
}

Matrix load_matrix(const fs::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) {
    return Matrix(0, 0);
  }

  std::vector<double> data;
  std::size_t cols = 0;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    const auto fields = split_fields(lines[k]);
    if (k == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      parse_fail(path, line_no,
                 "ragged rows: expected " + std::to_string(cols) + " columns, found " +
                     std::to_string(fields.size()));
    }
    for (const auto f : fields) {
      data.push_back(parse_real(f, path, line_no));
    }
  }
  return Eigen::Map<const Matrix>(data.data(), static_cast<Eigen::Index>(lines.size()),
                                  static_cast<Eigen::Index>(cols));
}

Vector load_vector(const fs::path& path) {
  const Matrix m = load_matrix(path);
  if (m.rows() > 0 && m.cols() != 1) {
    throw ParseError(path.string() + ":1: vector file must have exactly one column, found " +
                     std::to_string(m.cols()));
  }
  return m.rows() == 0 ? Vector(0) : Vector(m.col(0));
}

void save_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  finish_output(out, path);
}

void save_vector(const fs::path& path, const Vector& v) {
  std::ofstream out = open_output(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << format_double(v(i)) << '\n';
  }
  finish_output(out, path);
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kernel_ridge:
      return "kernel_ridge";
    case ModelKind::mf_sgd:
      return "mf_sgd";
  }
  return "unknown";
}

void save_model(const KernelRidgeModel& model, const fs::path& path) {
  json payload{{"lambda", {model.lambda()}},
               {"sigma", {model.sigma()}},
               {"y_mean", {model.y_mean()}},
               {"alpha", vector_to_json(model.alpha())},
               {"x_train", matrix_to_json(model.x_train())}};
  write_archive(ModelKind::kernel_ridge, std::move(payload), path);
}

void save_model(const MatrixFactorizationSGD& model, const fs::path& path) {
  const MFConfig& c = model.config();
  json payload{{"n_users", {c.n_users}},
               {"n_items", {c.n_items}},
               {"n_factors", {c.n_factors}},
               {"lr", {c.lr}},
               {"reg", {c.reg}},
               {"n_epochs", {c.n_epochs}},
               {"seed", {c.seed}},
               {"global_mean", {model.global_mean()}},
               {"user_bias", vector_to_json(model.user_bias())},
               {"item_bias", vector_to_json(model.item_bias())},
               {"user_factors", matrix_to_json(model.user_factors())},
               {"item_factors", matrix_to_json(model.item_factors())},
               {"rng_state", {model.rng_state()}}};
  write_archive(ModelKind::mf_sgd, std::move(payload), path);
}

ModelKind archive_kind(const fs::path& path) {
  return kind_of(read_archive(path));
}

KernelRidgeModel load_kernel_ridge(const fs::path& path) {
  const json doc = read_archive(path);
  expect_kind(doc, ModelKind::kernel_ridge);
  const json& p = doc["payload"];
  try {
    return KernelRidgeModel(KernelRidgeConfig(scalar_field(p, "lambda"), scalar_field(p, "sigma")),
                            matrix_field(p, "x_train"), vector_field(p, "alpha"),
                            scalar_field(p, "y_mean"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid kernel ridge archive: ") + e.what());
  }
}

MatrixFactorizationSGD load_mf(const fs::path& path) {
  const json doc = read_archive(path);
  expect_kind(doc, ModelKind::mf_sgd);
  const json& p = doc["payload"];

  const json& state = field(p, "rng_state");
  if (!state.is_array() || state.size() != 1 || !state[0].is_string()) {
    throw FormatError("field 'rng_state' must be a one-element string array.");
  }

  MFConfig config;
  config.n_users = int_field<std::int64_t>(p, "n_users");
  config.n_items = int_field<std::int64_t>(p, "n_items");
  config.n_factors = int_field<std::int64_t>(p, "n_factors");
  config.lr = scalar_field(p, "lr");
  config.reg = scalar_field(p, "reg");
  config.n_epochs = int_field<std::int64_t>(p, "n_epochs");
  config.seed = int_field<std::uint32_t>(p, "seed");
  try {
    return MatrixFactorizationSGD::from_parameters(
        config, matrix_field(p, "user_factors"), matrix_field(p, "item_factors"),
        vector_field(p, "user_bias"), vector_field(p, "item_bias"), scalar_field(p, "global_mean"),
        state[0].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid matrix factorization archive: ") + e.what());
  }
}

}  // namespace eigml::io
