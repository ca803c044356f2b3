#include "roughjump/path.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace roughjump {

namespace {

bool vec_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

bool vec_finite(const Vector& v) {
  for (int i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) return false;
  return true;
}

double dist(const double* a, const double* b, int d) {
  if (d == 1) return std::abs(a[0] - b[0]);
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double x = a[i] - b[i];
    s += x * x;
  }
  return std::sqrt(s);
}

}  // namespace

int RegulatedPath::check(int i) const {
  if (i < 0 || i >= static_cast<int>(times_.size()))
    throw std::out_of_range("RegulatedPath: grid index out of range");
  return i;
}

RegulatedPath RegulatedPath::create(double T, std::vector<double> times,
                                    std::vector<Vector> left,
                                    std::vector<Vector> at,
                                    std::vector<Vector> right) {
  if (!std::isfinite(T)) throw std::invalid_argument("path: T must be finite");
  const std::size_t n = times.size();
  if (n < 2) throw std::invalid_argument("path: need at least two grid points");
  if (left.size() != n || at.size() != n || right.size() != n)
    throw std::invalid_argument("path: value arrays must match the time grid");
  if (times.front() != 0.0)
    throw std::invalid_argument("path: first grid time must be 0");
  if (times.back() != T)
    throw std::invalid_argument("path: last grid time must equal T");
  const int d = static_cast<int>(at.front().size());
  if (d < 1) throw std::invalid_argument("path: dimension must be >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times[i]))
      throw std::invalid_argument("path: non-finite grid time");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("path: grid times must be strictly increasing");
    if (left[i].size() != d || at[i].size() != d || right[i].size() != d)
      throw std::invalid_argument("path: inconsistent value dimension");
    if (!vec_finite(left[i]) || !vec_finite(at[i]) || !vec_finite(right[i]))
      throw std::invalid_argument("path: non-finite value");
  }
  if (!vec_equal(left.front(), at.front()))
    throw std::invalid_argument("path: left limit at t=0 must equal the value");
  if (!vec_equal(right.back(), at.back()))
    throw std::invalid_argument("path: right limit at t=T must equal the value");

  RegulatedPath X;
  X.T_ = T;
  X.d_ = d;
  X.times_ = std::move(times);
  X.left_ = std::move(left);
  X.at_ = std::move(at);
  X.right_ = std::move(right);
  return X;
}

RegulatedPath RegulatedPath::from_values(double T, std::vector<double> times,
                                         std::vector<Vector> at) {
  std::vector<Vector> left = at;
  std::vector<Vector> right = at;
  return create(T, std::move(times), std::move(left), std::move(at),
                std::move(right));
}

Vector RegulatedPath::increment(int i, int j) const {
  check(i);
  check(j);
  if (i > j) throw std::invalid_argument("increment: need i <= j");
  return at_[j] - at_[i];
}

Vector RegulatedPath::increment_open(int i, int j) const {
  check(i);
  check(j);
  if (i >= j) throw std::invalid_argument("increment_open: need i < j");
  return left_[j] - right_[i];
}

bool RegulatedPath::has_jump(int i) const {
  check(i);
  return !vec_equal(left_[i], at_[i]) || !vec_equal(at_[i], right_[i]);
}

std::vector<JumpEvent> RegulatedPath::jumps() const {
  std::vector<JumpEvent> out;
  for (int i = 0; i < num_points(); ++i) {
    if (!has_jump(i)) continue;
    out.push_back(JumpEvent{i, times_[i], at_[i] - left_[i], right_[i] - at_[i]});
  }
  return out;
}

bool RegulatedPath::is_continuous() const {
  for (int i = 0; i < num_points(); ++i)
    if (has_jump(i)) return false;
  return true;
}

bool RegulatedPath::is_cadlag() const {
  for (int i = 0; i < num_points(); ++i)
    if (!vec_equal(right_[i], at_[i])) return false;
  return true;
}

double RegulatedPath::oscillation(int i, int j) const {
  check(i);
  check(j);
  if (i >= j) throw std::invalid_argument("oscillation: need i < j");
  if (j - i <= 1) return 0.0;
  // Gather the one-sided values of grid points strictly inside (t_i, t_j).
  std::vector<const Vector*> vals;
  vals.reserve(3 * (j - i - 1));
  for (int m = i + 1; m < j; ++m) {
    vals.push_back(&left_[m]);
    vals.push_back(&at_[m]);
    vals.push_back(&right_[m]);
  }
  if (d_ == 1) {
    double lo = (*vals[0])[0], hi = lo;
    for (const Vector* v : vals) {
      lo = std::min(lo, (*v)[0]);
      hi = std::max(hi, (*v)[0]);
    }
    return hi - lo;
  }
  double best = 0.0;
  for (std::size_t a = 0; a < vals.size(); ++a)
    for (std::size_t b = a + 1; b < vals.size(); ++b)
      best = std::max(best, (*vals[a] - *vals[b]).norm());
  return best;
}

namespace {

struct ExpandedSeq {
  std::vector<double> buf;  // M rows of d values
  std::vector<PathSample> labels;
  int d = 1;
  std::size_t rows() const { return labels.size(); }
  const double* row(std::size_t q) const { return buf.data() + q * d; }
};

// One-sided value sequence of X over [t_i, t_j]: the values attainable by
// partition points inside the window, in time order, consecutive exact
// duplicates dropped.
ExpandedSeq expand(const RegulatedPath& X, int i, int j) {
  ExpandedSeq seq;
  seq.d = X.dim();
  auto push = [&seq](const Vector& v, int index, Side side, double t) {
    const int d = seq.d;
    if (!seq.labels.empty()) {
      const double* last = seq.buf.data() + (seq.labels.size() - 1) * d;
      bool same = true;
      for (int c = 0; c < d; ++c)
        if (last[c] != v[c]) {
          same = false;
          break;
        }
      if (same) return;
    }
    for (int c = 0; c < d; ++c) seq.buf.push_back(v[c]);
    seq.labels.push_back(PathSample{index, side, t});
  };
  push(X.at(i), i, Side::at, X.time(i));
  push(X.right(i), i, Side::right, X.time(i));
  for (int m = i + 1; m < j; ++m) {
    push(X.left(m), m, Side::left, X.time(m));
    push(X.at(m), m, Side::at, X.time(m));
    push(X.right(m), m, Side::right, X.time(m));
  }
  if (j > i) {
    push(X.left(j), j, Side::left, X.time(j));
    push(X.at(j), j, Side::at, X.time(j));
  }
  return seq;
}

}  // namespace

double RegulatedPath::p_variation_pow(double p, int i, int j) const {
  check(i);
  check(j);
  if (p < 1.0) throw std::invalid_argument("p_variation: p must be >= 1");
  if (i > j) throw std::invalid_argument("p_variation: need i <= j");
  if (i == j) return 0.0;
  const ExpandedSeq seq = expand(*this, i, j);
  const std::size_t M = seq.rows();
  if (M < 2) return 0.0;
  std::vector<double> V(M, 0.0);
  for (std::size_t q = 1; q < M; ++q) {
    double best = 0.0;
    for (std::size_t r = 0; r < q; ++r) {
      const double cand = V[r] + std::pow(dist(seq.row(q), seq.row(r), d_), p);
      best = std::max(best, cand);
    }
    V[q] = best;
  }
  return V[M - 1];
}

double RegulatedPath::p_variation(double p, int i, int j) const {
  return std::pow(p_variation_pow(p, i, j), 1.0 / p);
}

PVarResult RegulatedPath::p_variation_witness(double p, int i, int j) const {
  check(i);
  check(j);
  if (p < 1.0) throw std::invalid_argument("p_variation: p must be >= 1");
  if (i > j) throw std::invalid_argument("p_variation: need i <= j");
  PVarResult res;
  if (i == j) {
    res.value = 0.0;
    res.chain = {PathSample{i, Side::at, time(i)}};
    return res;
  }
  const ExpandedSeq seq = expand(*this, i, j);
  const std::size_t M = seq.rows();
  if (M < 2) {
    res.value = 0.0;
    res.chain = {seq.labels.front()};
    return res;
  }
  std::vector<double> V(M, 0.0);
  std::vector<std::ptrdiff_t> from(M, -1);
  for (std::size_t q = 1; q < M; ++q) {
    double best = 0.0;
    std::ptrdiff_t arg = -1;
    for (std::size_t r = 0; r < q; ++r) {
      const double cand = V[r] + std::pow(dist(seq.row(q), seq.row(r), d_), p);
      if (cand > best) {
        best = cand;
        arg = static_cast<std::ptrdiff_t>(r);
      }
    }
    V[q] = best;
    from[q] = arg;
  }
  res.value = std::pow(V[M - 1], 1.0 / p);
  std::vector<PathSample> chain;
  std::ptrdiff_t q = static_cast<std::ptrdiff_t>(M) - 1;
  while (q >= 0) {
    chain.push_back(seq.labels[q]);
    q = from[q];
  }
  std::reverse(chain.begin(), chain.end());
  res.chain = std::move(chain);
  return res;
}

Vector RegulatedPath::value_lower_bound() const {
  Vector lo = at_[0];
  for (int i = 0; i < num_points(); ++i)
    for (int c = 0; c < d_; ++c)
      lo[c] = std::min({lo[c], left_[i][c], at_[i][c], right_[i][c]});
  return lo;
}

Vector RegulatedPath::value_upper_bound() const {
  Vector hi = at_[0];
  for (int i = 0; i < num_points(); ++i)
    for (int c = 0; c < d_; ++c)
      hi[c] = std::max({hi[c], left_[i][c], at_[i][c], right_[i][c]});
  return hi;
}

// --- Partition ---------------------------------------------------------------

Partition::Partition(std::vector<int> indices, int last_index) : idx_(std::move(indices)) {
  if (idx_.size() < 2 || idx_.front() != 0 || idx_.back() != last_index)
    throw std::invalid_argument("partition: must run from 0 to the last grid index");
  for (std::size_t k = 1; k < idx_.size(); ++k)
    if (idx_[k] <= idx_[k - 1])
      throw std::invalid_argument("partition: indices must be strictly increasing");
}

Partition Partition::coarsest(int last_index) {
  return Partition({0, last_index}, last_index);
}

Partition Partition::full(int last_index) {
  std::vector<int> idx(last_index + 1);
  for (int i = 0; i <= last_index; ++i) idx[i] = i;
  return Partition(std::move(idx), last_index);
}

Partition Partition::merge(const Partition& a, const Partition& b) {
  if (a.last_index() != b.last_index())
    throw std::invalid_argument("partition merge: different grids");
  std::vector<int> out;
  out.reserve(a.idx_.size() + b.idx_.size());
  std::set_union(a.idx_.begin(), a.idx_.end(), b.idx_.begin(), b.idx_.end(),
                 std::back_inserter(out));
  return Partition(std::move(out), a.last_index());
}

// --- ControlFunction ---------------------------------------------------------

ControlFunction::ControlFunction(std::shared_ptr<const RegulatedPath> X, double p)
    : path_(std::move(X)), p_(p) {
  if (!path_) throw std::invalid_argument("control: null path");
  if (p_ < 1.0) throw std::invalid_argument("control: p must be >= 1");
}

double ControlFunction::operator()(int i, int j) const {
  return path_->p_variation_pow(p_, i, j);
}

ControlFunction control(std::shared_ptr<const RegulatedPath> X, double p) {
  return ControlFunction(std::move(X), p);
}

ControlFunction control(RegulatedPath X, double p) {
  return ControlFunction(std::make_shared<const RegulatedPath>(std::move(X)), p);
}

// --- surgery -----------------------------------------------------------------

RegulatedPath subpath(const RegulatedPath& X, int i, int j) {
  if (i < 0 || j > X.last_index() || i >= j)
    throw std::invalid_argument("subpath: need 0 <= i < j <= last index");
  std::vector<double> times;
  std::vector<Vector> left, at, right;
  for (int m = i; m <= j; ++m) {
    times.push_back(X.time(m) - X.time(i));
    left.push_back(X.left(m));
    at.push_back(X.at(m));
    right.push_back(X.right(m));
  }
  left.front() = X.at(i);    // the left limit at t_i lies outside the window
  right.back() = X.at(j);    // likewise the right limit at t_j
  const double T = times.back();
  return RegulatedPath::create(T, std::move(times), std::move(left),
                               std::move(at), std::move(right));
}

RegulatedPath restrict_grid(const RegulatedPath& X, int stride) {
  const int N = X.last_index();
  if (stride < 1 || N % stride != 0)
    throw std::invalid_argument("restrict_grid: stride must divide the last index");
  std::vector<double> times;
  std::vector<Vector> left, at, right;
  for (int m = 0; m <= N; m += stride) {
    times.push_back(X.time(m));
    left.push_back(X.left(m));
    at.push_back(X.at(m));
    right.push_back(X.right(m));
  }
  return RegulatedPath::create(X.horizon(), std::move(times), std::move(left),
                               std::move(at), std::move(right));
}

RegulatedPath add_paths(const RegulatedPath& a, const RegulatedPath& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("add_paths: dimension mismatch");
  if (a.num_points() != b.num_points() || a.horizon() != b.horizon())
    throw std::invalid_argument("add_paths: grids must agree");
  std::vector<double> times = a.times();
  for (int i = 0; i < a.num_points(); ++i)
    if (a.time(i) != b.time(i))
      throw std::invalid_argument("add_paths: grids must agree");
  std::vector<Vector> left, at, right;
  for (int i = 0; i < a.num_points(); ++i) {
    left.push_back(a.left(i) + b.left(i));
    at.push_back(a.at(i) + b.at(i));
    right.push_back(a.right(i) + b.right(i));
  }
  return RegulatedPath::create(a.horizon(), std::move(times), std::move(left),
                               std::move(at), std::move(right));
}

RegulatedPath resample_steps(const RegulatedPath& steps,
                             const std::vector<double>& new_times) {
  const int N = steps.last_index();
  for (int k = 0; k <= N; ++k) {
    bool ok = true;
    for (int c = 0; c < steps.dim(); ++c)
      if (steps.right(k)[c] != steps.at(k)[c]) ok = false;
    if (k < N)
      for (int c = 0; c < steps.dim(); ++c)
        if (steps.left(k + 1)[c] != steps.at(k)[c]) ok = false;
    if (!ok)
      throw std::invalid_argument(
          "resample_steps: path is not piecewise-constant cadlag");
  }
  if (new_times.size() < 2 || new_times.front() != 0.0 ||
      new_times.back() != steps.horizon())
    throw std::invalid_argument("resample_steps: bad target grid");

  // Every original time must appear exactly in the target grid.
  std::size_t probe = 0;
  for (int k = 0; k <= N; ++k) {
    while (probe < new_times.size() && new_times[probe] < steps.time(k)) ++probe;
    if (probe >= new_times.size() || new_times[probe] != steps.time(k))
      throw std::invalid_argument(
          "resample_steps: target grid must contain every source time");
  }

  std::vector<Vector> left, at, right;
  int k = 0;
  for (std::size_t q = 0; q < new_times.size(); ++q) {
    const double u = new_times[q];
    while (k < N && steps.time(k + 1) <= u) ++k;
    if (u == steps.time(k)) {
      left.push_back(steps.left(k));
      at.push_back(steps.at(k));
      right.push_back(steps.right(k));
    } else {
      // Strictly inside a constancy interval.
      left.push_back(steps.at(k));
      at.push_back(steps.at(k));
      right.push_back(steps.at(k));
    }
  }
  std::vector<double> times = new_times;
  return RegulatedPath::create(steps.horizon(), std::move(times),
                               std::move(left), std::move(at), std::move(right));
}

// --- JSON --------------------------------------------------------------------

namespace {

Vector vector_from_json(const nlohmann::json& arr, int d, const char* what) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != d)
    throw PathFormatError(std::string("path json: '") + what +
                          "' must be an array of " + std::to_string(d) + " numbers");
  Vector v(d);
  for (int c = 0; c < d; ++c) {
    if (!arr[c].is_number())
      throw PathFormatError(std::string("path json: non-numeric entry in '") + what + "'");
    v[c] = arr[c].get<double>();
    if (!std::isfinite(v[c]))
      throw PathFormatError(std::string("path json: non-finite entry in '") + what + "'");
  }
  return v;
}

}  // namespace

RegulatedPath path_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw PathFormatError("path json: top level must be an object");
  // A report envelope whose payload is a path is accepted directly, so
  // generated files round-trip into the analysis commands.
  if (!j.contains("points") && j.contains("report") && j["report"].is_object())
    return path_from_json(j["report"]);
  if (!j.contains("T") || !j["T"].is_number())
    throw PathFormatError("path json: missing numeric 'T'");
  if (!j.contains("d") || !j["d"].is_number_integer())
    throw PathFormatError("path json: missing integer 'd'");
  if (!j.contains("points") || !j["points"].is_array() || j["points"].size() < 2)
    throw PathFormatError("path json: 'points' must be an array of at least 2 entries");
  const double T = j["T"].get<double>();
  const int d = j["d"].get<int>();
  if (!std::isfinite(T)) throw PathFormatError("path json: non-finite 'T'");
  if (d < 1) throw PathFormatError("path json: 'd' must be >= 1");

  std::vector<double> times;
  std::vector<Vector> left, at, right;
  for (const auto& pt : j["points"]) {
    if (!pt.is_object() || !pt.contains("t") || !pt["t"].is_number() ||
        !pt.contains("at"))
      throw PathFormatError("path json: each point needs numeric 't' and array 'at'");
    const double t = pt["t"].get<double>();
    if (!std::isfinite(t)) throw PathFormatError("path json: non-finite time");
    Vector a = vector_from_json(pt["at"], d, "at");
    Vector l = pt.contains("left") ? vector_from_json(pt["left"], d, "left") : a;
    Vector r = pt.contains("right") ? vector_from_json(pt["right"], d, "right") : a;
    times.push_back(t);
    at.push_back(std::move(a));
    left.push_back(std::move(l));
    right.push_back(std::move(r));
  }
  try {
    return RegulatedPath::create(T, std::move(times), std::move(left),
                                 std::move(at), std::move(right));
  } catch (const std::invalid_argument& e) {
    throw PathFormatError(std::string("path json: ") + e.what());
  }
}

nlohmann::json path_to_json(const RegulatedPath& X) {
  nlohmann::json j;
  j["T"] = X.horizon();
  j["d"] = X.dim();
  nlohmann::json points = nlohmann::json::array();
  for (int i = 0; i < X.num_points(); ++i) {
    nlohmann::json pt;
    pt["t"] = X.time(i);
    nlohmann::json at = nlohmann::json::array();
    for (int c = 0; c < X.dim(); ++c) at.push_back(X.at(i)[c]);
    pt["at"] = at;
    if (!vec_equal(X.left(i), X.at(i))) {
      nlohmann::json l = nlohmann::json::array();
      for (int c = 0; c < X.dim(); ++c) l.push_back(X.left(i)[c]);
      pt["left"] = l;
    }
    if (!vec_equal(X.right(i), X.at(i))) {
      nlohmann::json r = nlohmann::json::array();
      for (int c = 0; c < X.dim(); ++c) r.push_back(X.right(i)[c]);
      pt["right"] = r;
    }
    points.push_back(std::move(pt));
  }
  j["points"] = std::move(points);
  return j;
}

RegulatedPath load_path_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw PathFormatError("cannot open path file: " + filename);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PathFormatError("cannot parse path file " + filename + ": " + e.what());
  }
  return path_from_json(j);
}

void save_path_file(const RegulatedPath& X, const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw PathFormatError("cannot open file for writing: " + filename);
  out << path_to_json(X).dump(2) << "\n";
}

}  // namespace roughjump
