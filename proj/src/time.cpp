#include "evograph/time.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace evograph {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = floor_div(y, 400);
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u + static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = floor_div(z, 146097);
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  return {y + (m <= 2 ? 1 : 0), m, static_cast<int>(d)};
}

int days_in_month(std::int64_t y, int m) {
  static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[m - 1];
}

std::string format_time(TimeInstant t) {
  const std::int64_t days = floor_div(t, 86400);
  const std::int64_t sod = t - days * 86400;
  const CivilDate c = civil_from_days(days);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04lld-%02d-%02d %02d:%02d:%02d",
                static_cast<long long>(c.year), c.month, c.day, static_cast<int>(sod / 3600),
                static_cast<int>(sod / 60 % 60), static_cast<int>(sod % 60));
  return buf;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::int64_t to_int(std::string_view s) {
  std::int64_t v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

std::optional<TimeInstant> parse_time(std::string_view s) {
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':' || s[16] != ':')
    return std::nullopt;
  const auto yy = s.substr(0, 4), mo = s.substr(5, 2), dd = s.substr(8, 2), hh = s.substr(11, 2),
             mi = s.substr(14, 2), se = s.substr(17, 2);
  if (!all_digits(yy) || !all_digits(mo) || !all_digits(dd) || !all_digits(hh) || !all_digits(mi) ||
      !all_digits(se))
    return std::nullopt;
  const std::int64_t y = to_int(yy);
  const int m = static_cast<int>(to_int(mo));
  const int d = static_cast<int>(to_int(dd));
  const std::int64_t h = to_int(hh), min = to_int(mi), sec = to_int(se);
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m) || h > 23 || min > 59 || sec > 59)
    return std::nullopt;
  return days_from_civil(y, m, d) * 86400 + h * 3600 + min * 60 + sec;
}

Interval make_interval(TimeInstant start, TimeInstant end) {
  if (start >= end)
    throw std::invalid_argument("interval [" + std::to_string(start) + "," + std::to_string(end) +
                                ") is empty");
  return {start, end};
}

IntervalSet IntervalSet::from_intervals(std::vector<Interval> ivs) {
  for (const Interval& iv : ivs)
    if (iv.start >= iv.end) throw std::invalid_argument("empty interval in IntervalSet");
  bool canonical = true;
  for (std::size_t i = 1; i < ivs.size() && canonical; ++i)
    canonical = ivs[i - 1].end < ivs[i].start;
  IntervalSet out;
  if (canonical) {
    out.ivs_ = std::move(ivs);
    return out;
  }
  std::sort(ivs.begin(), ivs.end());
  for (const Interval& iv : ivs) {
    if (!out.ivs_.empty() && iv.start <= out.ivs_.back().end)
      out.ivs_.back().end = std::max(out.ivs_.back().end, iv.end);
    else
      out.ivs_.push_back(iv);
  }
  return out;
}

bool IntervalSet::contains(TimeInstant t) const {
  auto it = std::upper_bound(ivs_.begin(), ivs_.end(), t,
                             [](TimeInstant v, const Interval& iv) { return v < iv.start; });
  if (it == ivs_.begin()) return false;
  --it;
  return t < it->end;
}

bool IntervalSet::covers(const Interval& w) const {
  // Canonical form: a fully covered window must sit inside a single interval.
  auto it = std::upper_bound(ivs_.begin(), ivs_.end(), w.start,
                             [](TimeInstant v, const Interval& iv) { return v < iv.start; });
  if (it == ivs_.begin()) return false;
  --it;
  return it->start <= w.start && w.end <= it->end;
}

std::int64_t IntervalSet::covered_seconds(const Interval& w) const {
  std::int64_t total = 0;
  auto it = std::lower_bound(ivs_.begin(), ivs_.end(), w.start,
                             [](const Interval& iv, TimeInstant v) { return iv.end <= v; });
  for (; it != ivs_.end() && it->start < w.end; ++it)
    total += std::min(it->end, w.end) - std::max(it->start, w.start);
  return total;
}

std::int64_t IntervalSet::total_seconds() const {
  std::int64_t total = 0;
  for (const Interval& iv : ivs_) total += iv.length();
  return total;
}

Interval IntervalSet::hull() const {
  if (ivs_.empty()) throw std::logic_error("hull() of empty IntervalSet");
  return {ivs_.front().start, ivs_.back().end};
}

bool IntervalSet::is_canonical() const {
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (ivs_[i].start >= ivs_[i].end) return false;
    if (i > 0 && ivs_[i - 1].end >= ivs_[i].start) return false;
  }
  return true;
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.intervals().begin(), a.intervals().end());
  all.insert(all.end(), b.intervals().begin(), b.intervals().end());
  return IntervalSet::from_intervals(std::move(all));
}

IntervalSet intersect_window(const IntervalSet& s, const Interval& w) {
  std::vector<Interval> out;
  for (const Interval& iv : s.intervals()) {
    if (iv.end <= w.start) continue;
    if (iv.start >= w.end) break;
    out.push_back({std::max(iv.start, w.start), std::min(iv.end, w.end)});
  }
  return IntervalSet::from_intervals(std::move(out));
}

bool evaluate_quantifier(Quantifier q, const IntervalSet& validity, const Interval& window) {
  switch (q) {
    case Quantifier::Exists:
      return validity.covered_seconds(window) > 0;
    case Quantifier::Always:
      return validity.covers(window);
    case Quantifier::Most:
      return validity.covered_seconds(window) > window.length() / 2;
  }
  return false;
}

bool evaluate_quantifier(Quantifier q, const Interval& validity, const Interval& window) {
  const std::int64_t overlap =
      std::min(validity.end, window.end) - std::max(validity.start, window.start);
  switch (q) {
    case Quantifier::Exists:
      return overlap > 0;
    case Quantifier::Always:
      return validity.covers(window);
    case Quantifier::Most:
      return overlap > window.length() / 2;
  }
  return false;
}

WindowSpec WindowSpec::fixed(std::int64_t duration_seconds, TimeInstant origin) {
  if (duration_seconds < 1) throw std::invalid_argument("window duration must be >= 1 second");
  WindowSpec w;
  w.kind = Kind::FixedDuration;
  w.duration_seconds = duration_seconds;
  w.origin = origin;
  return w;
}

WindowSpec WindowSpec::calendar_month() {
  WindowSpec w;
  w.kind = Kind::CalendarMonth;
  return w;
}

Interval WindowSpec::window_at(TimeInstant t) const {
  if (kind == Kind::FixedDuration) {
    const std::int64_t k = floor_div(t - origin, duration_seconds);
    const TimeInstant s = origin + k * duration_seconds;
    return {s, s + duration_seconds};
  }
  const CivilDate c = civil_from_days(floor_div(t, 86400));
  return month_interval(c.year, c.month);
}

Interval month_interval(std::int64_t year, int month) {
  const TimeInstant s = days_from_civil(year, month, 1) * 86400;
  const std::int64_t ny = month == 12 ? year + 1 : year;
  const int nm = month == 12 ? 1 : month + 1;
  return {s, days_from_civil(ny, nm, 1) * 86400};
}

namespace {

void append_windows(const Interval& iv, const WindowSpec& w, std::vector<Interval>& out) {
  TimeInstant from = iv.start;
  if (!out.empty() && out.back().end > from) from = out.back().end;
  for (Interval win = w.window_at(from); win.start < iv.end; win = w.next_window(win))
    out.push_back(win);
}

}  // namespace

std::vector<Interval> windows_overlapping(const IntervalSet& s, const WindowSpec& w) {
  std::vector<Interval> out;
  for (const Interval& iv : s.intervals()) append_windows(iv, w, out);
  return out;
}

std::vector<Interval> windows_overlapping(const Interval& iv, const WindowSpec& w) {
  std::vector<Interval> out;
  append_windows(iv, w, out);
  return out;
}

}  // namespace evograph
