#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evograph {

// Seconds since 1970-01-01 00:00:00, interpreted as naive local clock time.
// Trip timestamps are local wall-clock values; there is no zone or DST
// arithmetic anywhere in the engine.
using TimeInstant = std::int64_t;

std::string format_time(TimeInstant t);                     // "YYYY-MM-DD HH:MM:SS"
std::optional<TimeInstant> parse_time(std::string_view s);  // strict inverse of format_time

// Division rounding toward negative infinity; b > 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b);

struct CivilDate {
  std::int64_t year = 1970;
  int month = 1;
  int day = 1;
};

// Proleptic Gregorian calendar; days are relative to 1970-01-01.
std::int64_t days_from_civil(std::int64_t year, int month, int day);
CivilDate civil_from_days(std::int64_t days);
int days_in_month(std::int64_t year, int month);

// Half-open [start, end); start < end always, so empty intervals are
// unrepresentable.
struct Interval {
  TimeInstant start = 0;
  TimeInstant end = 1;

  std::int64_t length() const { return end - start; }
  bool contains(TimeInstant t) const { return start <= t && t < end; }
  bool overlaps(const Interval& o) const { return start < o.end && o.start < end; }
  bool covers(const Interval& o) const { return start <= o.start && o.end <= end; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

// Throws std::invalid_argument unless start < end.
Interval make_interval(TimeInstant start, TimeInstant end);

/// Admission rule for a temporal window: any overlap (Exists), full coverage
/// (Always), or a strict majority of the window's seconds (Most).
enum class Quantifier { Exists, Always, Most };

// Coalesced union of half-open intervals: sorted by start, pairwise disjoint,
// never abutting. The canonical encoding of a set of time instants.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(Interval iv) : ivs_{iv} {}

  // Sorts and coalesces; throws std::invalid_argument on an empty member.
  static IntervalSet from_intervals(std::vector<Interval> ivs);

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool empty() const { return ivs_.empty(); }
  std::size_t size() const { return ivs_.size(); }

  bool contains(TimeInstant t) const;
  bool covers(const Interval& w) const;
  // Number of seconds of *this falling inside w.
  std::int64_t covered_seconds(const Interval& w) const;
  std::int64_t total_seconds() const;
  Interval hull() const;  // pre: !empty()

  bool is_canonical() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> ivs_;
};

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet intersect_window(const IntervalSet& s, const Interval& w);

/// Exists: validity overlaps the window at all. Always: the window is fully
/// covered. Most: covered seconds strictly exceed half the window length
/// (exactly half is not "most").
bool evaluate_quantifier(Quantifier q, const IntervalSet& validity, const Interval& window);
bool evaluate_quantifier(Quantifier q, const Interval& validity, const Interval& window);

// A gapless, non-overlapping tiling of the timeline. FixedDuration windows
// start at origin + k*duration; CalendarMonth windows run from the first
// second of a month to the first second of the next, in the naive local
// calendar.
struct WindowSpec {
  enum class Kind { FixedDuration, CalendarMonth };

  Kind kind = Kind::FixedDuration;
  std::int64_t duration_seconds = 600;  // FixedDuration only
  TimeInstant origin = 0;               // FixedDuration only

  static WindowSpec fixed(std::int64_t duration_seconds, TimeInstant origin = 0);
  static WindowSpec calendar_month();

  Interval window_at(TimeInstant t) const;  // the tiling window containing t
  Interval next_window(const Interval& w) const { return window_at(w.end); }

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

// Ordered, duplicate-free list of tiling windows that intersect s.
std::vector<Interval> windows_overlapping(const IntervalSet& s, const WindowSpec& w);
std::vector<Interval> windows_overlapping(const Interval& iv, const WindowSpec& w);

// [first second of (year, month), first second of the following month).
Interval month_interval(std::int64_t year, int month);

}  // namespace evograph
