#include "egadm/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace egadm::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceFormatError("cannot read " + path.string());
  return in;
}

double parse_real(const std::string& tok, const fs::path& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) {
    throw InstanceFormatError(path.string() + ": bad number '" + tok + "'");
  }
  return v;
}

json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InstanceFormatError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create directory " + dir.string());
  }
}

template <class T>
T get_field(const json& j, const char* key, const fs::path& where) {
  if (!j.contains(key)) {
    throw InstanceFormatError(where.string() + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InstanceFormatError(where.string() + ": field '" + key + "': " + e.what());
  }
}

void check_version(const json& meta, const fs::path& where) {
  const int v = get_field<int>(meta, "format_version", where);
  if (v != kFormatVersion) {
    throw InstanceFormatError(where.string() + ": unsupported format_version " +
                              std::to_string(v));
  }
}

}  // namespace

void write_matrix_market(const fs::path& path, const Matrix& m) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out << fmt17(m(i, j)) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Matrix read_matrix_market(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("%%MatrixMarket matrix array real general", 0) != 0) {
    throw InstanceFormatError(path.string() + ": not a Matrix Market array file");
  }
  // skip comments
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream dims(line);
  long rows = -1, cols = -1;
  if (!(dims >> rows >> cols) || rows < 0 || cols < 0) {
    throw InstanceFormatError(path.string() + ": bad size line");
  }
  Matrix m(rows, cols);
  std::string tok;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      if (!(in >> tok)) {
        throw InstanceFormatError(path.string() + ": too few entries");
      }
      m(i, j) = parse_real(tok, path);
    }
  }
  if (in >> tok) throw InstanceFormatError(path.string() + ": trailing data");
  if (!m.allFinite()) throw InstanceFormatError(path.string() + ": non-finite entry");
  return m;
}

void write_vector(const fs::path& path, const Vector& v) {
  auto out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << fmt17(v[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Vector read_vector(const fs::path& path) {
  auto in = open_in(path);
  std::vector<double> vals;
  std::string tok;
  while (in >> tok) vals.push_back(parse_real(tok, path));
  Vector v(static_cast<Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Index>(i)] = vals[i];
  return v;
}

void write_instance(const fs::path& dir, const bp::BasisPursuitInstance& inst) {
  prepare_dir(dir);
  json meta = {{"format_version", kFormatVersion},
               {"kind", "bp"},
               {"n", inst.n()},
               {"m", inst.m()},
               {"s", inst.s},
               {"seed", inst.seed}};
  write_json(dir / "meta.json", meta);
  write_matrix_market(dir / "A.mtx", inst.A);
  write_vector(dir / "b.txt", inst.b);
  write_vector(dir / "xhat.txt", inst.x_hat);
}

void write_instance(const fs::path& dir,
                    const fused::FusedLogisticInstance& inst) {
  prepare_dir(dir);
  json meta = {{"format_version", kFormatVersion},
               {"kind", "fused"},
               {"n", inst.n()},
               {"m", inst.m()},
               {"seed", inst.seed},
               {"intercept", inst.intercept}};
  write_json(dir / "meta.json", meta);
  json pattern = {{"generator", std::string(fused::to_string(inst.pattern))},
                  {"n", inst.n()},
                  {"m", inst.m()},
                  {"seed", inst.seed}};
  if (inst.pattern == fused::Pattern::Simple) {
    pattern["heights"] = {inst.x_hat[0], inst.x_hat[200], inst.x_hat[400],
                          inst.x_hat[600]};
  }
  write_json(dir / "pattern.json", pattern);
  write_matrix_market(dir / "A.mtx", inst.A);
  write_vector(dir / "b.txt", inst.labels);
  write_vector(dir / "labels.txt", inst.labels);
  write_vector(dir / "xhat.txt", inst.x_hat);
}

InstanceKind detect_kind(const fs::path& dir) {
  const json meta = read_json(dir / "meta.json");
  const auto kind = get_field<std::string>(meta, "kind", dir / "meta.json");
  if (kind == "bp") return InstanceKind::BasisPursuit;
  if (kind == "fused") return InstanceKind::FusedLogistic;
  throw InstanceFormatError((dir / "meta.json").string() +
                            ": unknown kind '" + kind + "'");
}

bp::BasisPursuitInstance read_bp_instance(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  const json meta = read_json(meta_path);
  check_version(meta, meta_path);
  if (get_field<std::string>(meta, "kind", meta_path) != "bp") {
    throw InstanceFormatError(meta_path.string() + ": not a basis pursuit instance");
  }
  bp::BasisPursuitInstance inst;
  const auto n = get_field<Index>(meta, "n", meta_path);
  const auto m = get_field<Index>(meta, "m", meta_path);
  inst.s = get_field<Index>(meta, "s", meta_path);
  inst.seed = get_field<std::uint64_t>(meta, "seed", meta_path);
  inst.A = read_matrix_market(dir / "A.mtx");
  inst.b = read_vector(dir / "b.txt");
  inst.x_hat = read_vector(dir / "xhat.txt");
  if (inst.A.rows() != m || inst.A.cols() != n || inst.b.size() != m ||
      inst.x_hat.size() != n) {
    throw InstanceFormatError(dir.string() + ": file shapes disagree with meta.json");
  }
  return inst;
}

fused::FusedLogisticInstance read_fused_instance(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  const json meta = read_json(meta_path);
  check_version(meta, meta_path);
  if (get_field<std::string>(meta, "kind", meta_path) != "fused") {
    throw InstanceFormatError(meta_path.string() + ": not a fused logistic instance");
  }
  const fs::path pattern_path = dir / "pattern.json";
  const json pattern = read_json(pattern_path);
  const auto gen = get_field<std::string>(pattern, "generator", pattern_path);
  const auto parsed = fused::parse_pattern(gen);
  if (!parsed) {
    throw InstanceFormatError(pattern_path.string() + ": unknown generator '" +
                              gen + "'");
  }

  fused::FusedLogisticInstance inst;
  const auto n = get_field<Index>(meta, "n", meta_path);
  const auto m = get_field<Index>(meta, "m", meta_path);
  inst.seed = get_field<std::uint64_t>(meta, "seed", meta_path);
  inst.intercept = get_field<double>(meta, "intercept", meta_path);
  inst.pattern = *parsed;
  inst.A = read_matrix_market(dir / "A.mtx");
  inst.labels = read_vector(dir / "labels.txt");
  inst.x_hat = read_vector(dir / "xhat.txt");
  if (inst.A.rows() != m || inst.A.cols() != n || inst.labels.size() != m ||
      inst.x_hat.size() != n) {
    throw InstanceFormatError(dir.string() + ": file shapes disagree with meta.json");
  }
  for (Index i = 0; i < m; ++i) {
    if (inst.labels[i] != 1.0 && inst.labels[i] != -1.0) {
      throw InstanceFormatError((dir / "labels.txt").string() +
                                ": labels must be -1 or +1");
    }
  }
  return inst;
}

}  // namespace egadm::io
