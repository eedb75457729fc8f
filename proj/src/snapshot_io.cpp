#include "lrom/snapshot_io.hpp"

#include "lrom/errors.hpp"
#include "lrom/numfmt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "binary payloads are little-endian float64");

namespace lrom {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Deterministic probe vectors keep validation reproducible across runs.
constexpr int kSpotCheckVectors = 16;
constexpr std::uint64_t kSpotCheckSeed = 0x53504443ull;

Vector probe_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = dist(rng);
  return x;
}

} // namespace

std::string to_string(BoundaryKind bc) {
  return bc == BoundaryKind::periodic ? "periodic" : "dirichlet";
}

BoundaryKind boundary_from_string(const std::string& text) {
  if (text == "periodic") return BoundaryKind::periodic;
  if (text == "dirichlet") return BoundaryKind::dirichlet;
  throw FormatError("unknown boundary condition tag: '" + text + "'");
}

void SnapshotSet::validate() const {
  const Index n = dof_count();
  const Index s = snapshot_count();
  if (s < 2) {
    throw ValidationError("snapshot set needs s >= 2, got s = " +
                          std::to_string(s));
  }
  if (times.size() != s) {
    throw ConsistencyError("times length " + std::to_string(times.size()) +
                           " does not match snapshot count " +
                           std::to_string(s));
  }
  for (Index k = 1; k < s; ++k) {
    if (!(times[k] > times[k - 1])) {
      throw ValidationError("times must be strictly increasing (violated at "
                            "index " +
                            std::to_string(k) + ")");
    }
  }
  if (mass.rows() != n || mass.cols() != n || stiffness.rows() != n ||
      stiffness.cols() != n) {
    throw ConsistencyError("operator dimensions do not match the state "
                           "dimension n = " +
                           std::to_string(n));
  }
  if (meta.grid_size != n) {
    throw ConsistencyError("meta grid size " + std::to_string(meta.grid_size) +
                           " does not match states rows " + std::to_string(n));
  }

  std::mt19937_64 rng(kSpotCheckSeed);
  for (int k = 0; k < kSpotCheckVectors; ++k) {
    const Vector x = probe_vector(rng, n);
    const double xx = x.squaredNorm();
    if (!(weighted_inner_product(x, x, mass) > 0.0)) {
      throw ValidationError("mass matrix failed the positive-definite spot "
                            "check");
    }
    if (weighted_inner_product(x, x, stiffness) < -1e-12 * xx) {
      throw ValidationError("stiffness matrix failed the positive-semidefinite "
                            "spot check");
    }
  }
}

double weighted_inner_product(const Vector& x, const Vector& y,
                              const SparseMatrix& weight) {
  if (x.size() != y.size() || weight.rows() != x.size() ||
      weight.cols() != y.size()) {
    throw ValidationError("weighted_inner_product: dimension mismatch");
  }
  return x.dot(weight * y);
}

double weighted_norm(const Vector& x, const SparseMatrix& weight) {
  return std::sqrt(weighted_inner_product(x, x, weight));
}

SparseMatrix OperatorFile::to_symmetric() const {
  std::vector<Eigen::Triplet<double>> full;
  full.reserve(2 * triplets.size());
  for (const auto& t : triplets) {
    full.push_back(t);
    if (t.row() != t.col()) {
      full.emplace_back(t.col(), t.row(), t.value());
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(full.begin(), full.end());
  out.makeCompressed();
  return out;
}

OperatorFile OperatorFile::from_symmetric(Kind kind, const SparseMatrix& full) {
  OperatorFile op;
  op.kind = kind;
  op.n = full.rows();
  for (int col = 0; col < full.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      if (it.row() <= it.col()) {
        op.triplets.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  std::sort(op.triplets.begin(), op.triplets.end(),
            [](const auto& a, const auto& b) {
              return std::pair(a.row(), a.col()) < std::pair(b.row(), b.col());
            });
  return op;
}

OperatorFile read_operator_file(const std::filesystem::path& path,
                                OperatorFile::Kind kind, Index n) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open operator file: " + path.string());
  }
  OperatorFile op;
  op.kind = kind;
  op.n = n;
  std::set<std::pair<Index, Index>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    std::istringstream fields(body);
    std::string si, sj, sv;
    if (!(fields >> si >> sj >> sv) || !(fields >> std::ws).eof()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'i j value'");
    }
    const Index i = static_cast<Index>(numfmt::parse_integer(si));
    const Index j = static_cast<Index>(numfmt::parse_integer(sj));
    const double v = numfmt::parse_double(sv);
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw ConsistencyError(path.string() + ":" + std::to_string(line_no) +
                             ": index out of range for n = " +
                             std::to_string(n));
    }
    if (i > j) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": symmetric storage requires i <= j");
    }
    if (!seen.emplace(i, j).second) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": duplicate entry (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
    }
    op.triplets.emplace_back(i, j, v);
  }
  return op;
}

void write_operator_file(const OperatorFile& op,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write operator file: " + path.string());
  }
  for (const auto& t : op.triplets) {
    out << t.row() << ' ' << t.col() << ' ' << numfmt::format_double(t.value())
        << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

namespace {

struct BundlePaths {
  std::filesystem::path meta, states, times, mass, stiffness;

  static BundlePaths at(const std::filesystem::path& base) {
    BundlePaths p;
    p.meta = base;
    p.meta += ".meta";
    p.states = base;
    p.states += ".states.bin";
    p.times = base;
    p.times += ".times.txt";
    p.mass = base;
    p.mass += ".mass.coo";
    p.stiffness = base;
    p.stiffness += ".stiffness.coo";
    return p;
  }
};

std::map<std::string, std::string> read_meta_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open bundle meta file: " + path.string());
  }
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    kv[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return kv;
}

std::string require_key(const std::map<std::string, std::string>& kv,
                        const std::string& key,
                        const std::filesystem::path& path) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    throw FormatError(path.string() + ": missing key '" + key + "'");
  }
  return it->second;
}

} // namespace

SnapshotSet read_snapshot_set(const std::filesystem::path& base) {
  const auto paths = BundlePaths::at(base);
  const auto kv = read_meta_file(paths.meta);

  SnapshotSet set;
  const Index n =
      static_cast<Index>(numfmt::parse_integer(require_key(kv, "n", paths.meta)));
  const Index s =
      static_cast<Index>(numfmt::parse_integer(require_key(kv, "s", paths.meta)));
  if (n <= 0 || s <= 0) {
    throw FormatError(paths.meta.string() + ": n and s must be positive");
  }
  set.meta.grid_size = n;
  set.meta.viscosity = numfmt::parse_double(require_key(kv, "nu", paths.meta));
  set.meta.domain_length =
      numfmt::parse_double(require_key(kv, "domain_length", paths.meta));
  set.meta.boundary = boundary_from_string(require_key(kv, "bc", paths.meta));

  std::ifstream bin(paths.states, std::ios::binary);
  if (!bin) {
    throw IoError("cannot open states payload: " + paths.states.string());
  }
  bin.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(bin.tellg());
  bin.seekg(0);
  const std::size_t expected =
      static_cast<std::size_t>(n) * static_cast<std::size_t>(s) * sizeof(double);
  if (bytes != expected) {
    throw ConsistencyError(paths.states.string() + ": payload holds " +
                           std::to_string(bytes) + " bytes, header implies " +
                           std::to_string(expected));
  }
  set.states.resize(n, s);
  bin.read(reinterpret_cast<char*>(set.states.data()),
           static_cast<std::streamsize>(expected));
  if (!bin) {
    throw IoError("short read on " + paths.states.string());
  }

  std::ifstream times_in(paths.times);
  if (!times_in) {
    throw IoError("cannot open times file: " + paths.times.string());
  }
  std::vector<double> times;
  std::string line;
  while (std::getline(times_in, line)) {
    const std::string body = trim(line);
    if (body.empty()) continue;
    times.push_back(numfmt::parse_double(body));
  }
  if (static_cast<Index>(times.size()) != s) {
    throw ConsistencyError(paths.times.string() + ": " +
                           std::to_string(times.size()) +
                           " time stamps, header implies " + std::to_string(s));
  }
  set.times = Eigen::Map<const Vector>(times.data(), times.size());

  set.mass =
      read_operator_file(paths.mass, OperatorFile::Kind::mass, n).to_symmetric();
  set.stiffness =
      read_operator_file(paths.stiffness, OperatorFile::Kind::stiffness, n)
          .to_symmetric();

  set.validate();
  return set;
}

void write_snapshot_set(const SnapshotSet& set,
                        const std::filesystem::path& base) {
  set.validate();
  const auto paths = BundlePaths::at(base);
  if (base.has_parent_path()) {
    std::filesystem::create_directories(base.parent_path());
  }

  {
    std::ofstream meta(paths.meta, std::ios::trunc);
    if (!meta) {
      throw IoError("cannot write bundle meta file: " + paths.meta.string());
    }
    meta << "n=" << set.dof_count() << '\n'
         << "s=" << set.snapshot_count() << '\n'
         << "nu=" << numfmt::format_double(set.meta.viscosity) << '\n'
         << "domain_length=" << numfmt::format_double(set.meta.domain_length)
         << '\n'
         << "bc=" << to_string(set.meta.boundary) << '\n';
    if (!meta) throw IoError("write failed: " + paths.meta.string());
  }
  {
    std::ofstream bin(paths.states, std::ios::binary | std::ios::trunc);
    if (!bin) {
      throw IoError("cannot write states payload: " + paths.states.string());
    }
    bin.write(reinterpret_cast<const char*>(set.states.data()),
              static_cast<std::streamsize>(sizeof(double) *
                                           static_cast<std::size_t>(
                                               set.states.size())));
    if (!bin) throw IoError("write failed: " + paths.states.string());
  }
  {
    std::ofstream times(paths.times, std::ios::trunc);
    if (!times) {
      throw IoError("cannot write times file: " + paths.times.string());
    }
    for (Index k = 0; k < set.times.size(); ++k) {
      times << numfmt::format_double(set.times[k]) << '\n';
    }
    if (!times) throw IoError("write failed: " + paths.times.string());
  }
  write_operator_file(
      OperatorFile::from_symmetric(OperatorFile::Kind::mass, set.mass),
      paths.mass);
  write_operator_file(OperatorFile::from_symmetric(
                          OperatorFile::Kind::stiffness, set.stiffness),
                      paths.stiffness);
}

} // namespace lrom
