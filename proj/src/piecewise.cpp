#include "nbl/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "nbl/errors.hpp"

namespace nbl {

double Segment::eval(double x) const {
  const long double xl = x;
  return static_cast<double>(static_cast<long double>(a) / xl + static_cast<long double>(b) +
                             static_cast<long double>(b_lo) + static_cast<long double>(c) * std::log(xl));
}

double PiecewiseHyperbolic::eval(double x) const {
  if (!(x > 0.0)) throw ArgumentError("eval: x must be positive");
  if (x > far_start) {
    if (far_mode == FarMode::Exact) return far_coeff / x;
    throw ArgumentError("eval: x beyond the represented range");
  }
  if (x <= epsilon) throw ArgumentError("eval: x below the cutoff");
  auto it = std::lower_bound(segments.begin(), segments.end(), x,
                             [](const Segment& s, double v) { return s.hi < v; });
  if (it == segments.end()) throw ArgumentError("eval: x outside the segments");
  return it->eval(x);
}

namespace {

using u128 = unsigned __int128;

// Breakpoint p / (q j).
struct Event {
  std::uint64_t p;
  std::uint64_t q;
  std::uint64_t j;
  std::uint32_t stream;
};

struct EventLess {
  bool operator()(const Event& x, const Event& y) const {
    return static_cast<u128>(x.p) * y.q * y.j < static_cast<u128>(y.p) * x.q * x.j;
  }
};

bool same_point(const Event& x, const Event& y) {
  return static_cast<u128>(x.p) * y.q * y.j == static_cast<u128>(y.p) * x.q * x.j;
}

double event_value(const Event& e) {
  return static_cast<double>(static_cast<long double>(e.p) / (static_cast<long double>(e.q) * e.j));
}

bool above(const Event& e, double eps) {
  return static_cast<long double>(e.p) > static_cast<long double>(eps) * e.q * e.j;
}

enum class StreamKind { Term, Break, Generator };

struct Stream {
  StreamKind kind;
  double coeff;   // Term: c_k; Break: delta_i
  double log_base;
};

// Double-double accumulator.
struct TwoSum {
  double s = 0.0;
  double e = 0.0;
  void add(double x) {
    const double t = s + x;
    e += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  std::pair<double, double> split() const {
    const double hi = s + e;
    return {hi, e - (hi - s)};
  }
};

constexpr std::uint64_t kMaxPart = std::uint64_t{1} << 32;

Event first_event(const Ratio& r, std::uint32_t stream) {
  if (r.num() <= 0 || static_cast<std::uint64_t>(r.num()) >= kMaxPart ||
      static_cast<std::uint64_t>(r.den()) >= kMaxPart) {
    throw OverflowError("breakpoint " + r.str() + " needs numerator and denominator below 2^32");
  }
  return {static_cast<std::uint64_t>(r.num()), static_cast<std::uint64_t>(r.den()), 1, stream};
}

double log_of(const Ratio& r) {
  return std::log(static_cast<double>(r.num())) - std::log(static_cast<double>(r.den()));
}

}  // namespace

PiecewiseHyperbolic flatten(const FlattenInput& in, const FlattenOptions& opt) {
  const double eps = opt.epsilon;
  if (!(eps >= 0.0)) throw ArgumentError("flatten: epsilon must be non-negative");
  const bool has_sum = in.sum != nullptr && !in.sum->empty();
  const bool has_weight = in.weight != nullptr && !in.weight->empty();
  if (has_sum && !(eps > 0.0 && eps < in.sum->min_theta().to_double())) {
    throw ArgumentError("flatten: epsilon must lie in (0, min theta) = (0, " + in.sum->min_theta().str() + ")");
  }
  if (has_weight && !(eps > 0.0)) throw ArgumentError("flatten: epsilon must be positive for a T-weight");

  std::vector<Stream> streams;
  std::priority_queue<Event, std::vector<Event>, EventLess> heap;
  double a_total = 0.0;
  double pos = 0.0;
  double neg = 0.0;

  if (has_sum) {
    for (const auto& t : in.sum->terms()) {
      const double c = in.sum_scale * t.c.value();
      heap.push(first_event(t.theta, static_cast<std::uint32_t>(streams.size())));
      streams.push_back({StreamKind::Term, c, 0.0});
      (c > 0 ? pos : neg) += std::abs(c);
    }
    a_total += in.sum_scale * in.sum->tail_coeff().value();
  }
  if (has_weight) {
    const auto& w = *in.weight;
    const StepWeight ws = w.scaled(in.weight_scale);
    pos += ws.positive_log_mass();
    neg += ws.negative_log_mass();
    const std::size_t k = ws.values.size();
    for (std::size_t i = 0; i <= k; ++i) {
      const double cur = i < k ? ws.values[i] : 0.0;
      const double prev = i > 0 ? ws.values[i - 1] : 0.0;
      const double delta = cur - prev;
      if (delta == 0.0) continue;
      heap.push(first_event(ws.breaks[i], static_cast<std::uint32_t>(streams.size())));
      streams.push_back({StreamKind::Break, delta, log_of(ws.breaks[i])});
    }
    a_total += ws.integral();
  }

  PiecewiseHyperbolic pw;
  if (in.generator) {
    heap.push(first_event(Ratio(1), static_cast<std::uint32_t>(streams.size())));
    streams.push_back({StreamKind::Generator, 0.0, 0.0});
    if (in.generator->kind == GeneratorKind::NegChi) {
      pw.near_const = std::max(pos + 1.0, neg - 1.0);
    } else {
      pw.near_const = std::max(pos, neg);
      pw.near_log = 1.0;
    }
  } else {
    pw.near_const = std::max(pos, neg);
  }

  const bool open_near_zero = has_sum || has_weight;
  pw.epsilon = open_near_zero ? eps : 0.0;
  if (!open_near_zero) pw.near_const = pw.near_log = 0.0;

  const double top = heap.empty() ? 0.0 : event_value(heap.top());
  if (open_near_zero && !(eps < top)) throw ArgumentError("flatten: epsilon must lie below the largest breakpoint");
  pw.far_start = top;
  pw.far_mode = FarMode::Exact;
  pw.far_coeff = a_total;

  TwoSum b;
  double c = 0.0;
  double cur_hi = top;
  std::uint64_t events = 0;
  auto emit = [&](double lo) {
    if (!(cur_hi > lo)) return;
    const auto [bh, bl] = b.split();
    pw.segments.push_back({lo, cur_hi, a_total, bh, bl, c});
  };

  while (!heap.empty()) {
    const Event head = heap.top();
    if (open_near_zero && !above(head, eps)) break;
    const double v = event_value(head);
    emit(v);
    cur_hi = v;
    while (!heap.empty() && same_point(heap.top(), head)) {
      Event e = heap.top();
      heap.pop();
      if (++events > opt.max_events) {
        throw ResourceError("flatten: more than " + std::to_string(opt.max_events) +
                            " breakpoints; raise epsilon or lower n");
      }
      const Stream& s = streams[e.stream];
      switch (s.kind) {
        case StreamKind::Term:
          b.add(-s.coeff);
          break;
        case StreamKind::Break:
          b.add(s.coeff * (std::log(static_cast<double>(e.j)) - s.log_base));
          c += s.coeff;
          break;
        case StreamKind::Generator:
          if (in.generator->kind == GeneratorKind::NegChi) {
            b.add(1.0);
          } else {
            c -= 1.0;
          }
          continue;  // single event
      }
      ++e.j;
      if (!open_near_zero || above(e, eps)) heap.push(e);
    }
  }
  emit(pw.epsilon);
  std::reverse(pw.segments.begin(), pw.segments.end());
  pw.events = events;

  if (opt.unit_interval) {
    while (!pw.segments.empty() && pw.segments.back().lo >= 1.0) pw.segments.pop_back();
    if (!pw.segments.empty() && pw.segments.back().hi > 1.0) pw.segments.back().hi = 1.0;
    const double from = pw.segments.empty() ? pw.epsilon : pw.segments.back().hi;
    if (from < 1.0) pw.segments.push_back({from, 1.0, a_total, 0.0, 0.0, 0.0});
    pw.far_start = 1.0;
    pw.far_mode = FarMode::None;
    pw.far_coeff = 0.0;
  }
  return pw;
}

PiecewiseHyperbolic to_piecewise(const BeurlingSum& sum, std::optional<Generator> generator,
                                 const FlattenOptions& options) {
  FlattenInput in;
  in.sum = &sum;
  in.generator = generator;
  return flatten(in, options);
}

PiecewiseHyperbolic to_piecewise(const GnFunction& g, std::optional<Generator> generator,
                                 const FlattenOptions& options) {
  FlattenInput in;
  in.weight = &g.weight();
  in.generator = generator;
  return flatten(in, options);
}

PiecewiseHyperbolic to_piecewise_minus_T(const BeurlingSum& sum, const StepWeight& weight,
                                         const FlattenOptions& options) {
  FlattenInput in;
  in.sum = &sum;
  in.weight = &weight;
  in.weight_scale = -1.0;
  return flatten(in, options);
}

PiecewiseHyperbolic dilation_difference_quotient(double a) {
  if (!(a > 1.0)) throw ArgumentError("dilation_difference_quotient: a must exceed 1");
  const double h = a - 1.0;
  PiecewiseHyperbolic pw;
  // (0, 1/a]: log(a)/(a-1) - 1; (1/a, 1]: -log(x)/(a-1) - 1
  pw.segments.push_back({0.0, 1.0 / a, 0.0, std::log1p(h) / h - 1.0, 0.0, 0.0});
  pw.segments.push_back({1.0 / a, 1.0, 0.0, -1.0, 0.0, -1.0 / h});
  pw.epsilon = 0.0;
  pw.far_start = 1.0;
  pw.far_mode = FarMode::None;
  return pw;
}

}  // namespace nbl
