#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace quicktalk {

/// Three-level hierarchical device-type filter (4, 4 and 6 bits). Code 0 at a
/// level is a wildcard; once a level is a wildcard every deeper level must be
/// too.
struct DeviceTypeFilter {
  std::uint8_t level1 = 0;
  std::uint8_t level2 = 0;
  std::uint8_t level3 = 0;

  static constexpr std::uint8_t kWildcard = 0;
  static constexpr std::uint8_t kLevel1Max = 0xF;
  static constexpr std::uint8_t kLevel2Max = 0xF;
  static constexpr std::uint8_t kLevel3Max = 0x3F;

  /// Bit widths respected and prefix discipline holds.
  bool valid() const;
  /// No wildcard at any level.
  bool concrete() const { return level1 != 0 && level2 != 0 && level3 != 0; }

  bool operator==(const DeviceTypeFilter&) const = default;
};

/// The concrete type of an IoT device. All three levels are non-wildcard.
class DeviceType {
 public:
  /// Throws InputError if any level is zero or out of width.
  DeviceType(std::uint8_t level1, std::uint8_t level2, std::uint8_t level3);
  explicit DeviceType(const DeviceTypeFilter& exact);

  std::uint8_t level1() const { return levels_.level1; }
  std::uint8_t level2() const { return levels_.level2; }
  std::uint8_t level3() const { return levels_.level3; }
  /// The exact filter selecting only this type.
  const DeviceTypeFilter& as_filter() const { return levels_; }

  bool operator==(const DeviceType&) const = default;

 private:
  DeviceTypeFilter levels_;
};

constexpr std::uint16_t kFilterCodeMask = 0x3FFF;

/// level1 in bits 13..10, level2 in 9..6, level3 in 5..0. Throws
/// MalformedFilter on a discipline violation, InputError on width overflow.
std::uint16_t encode_filter(const DeviceTypeFilter& f);

/// Inverse of encode_filter. Throws InputError if code exceeds 14 bits and
/// MalformedFilter on a prefix-discipline violation.
DeviceTypeFilter decode_filter(std::uint16_t code);

/// Non-throwing decode for gating paths.
std::optional<DeviceTypeFilter> try_decode_filter(std::uint16_t code);

bool matches(const DeviceTypeFilter& filter, const DeviceType& device);

/// Name-to-code table of device types, loaded from `NAME = l1.l2.l3` lines.
/// Entries may be partial filters (e.g. DISPLAY = 1.0.0) or concrete types.
class DeviceRegistry {
 public:
  /// The built-in versioned table.
  static const DeviceRegistry& builtin();
  static std::string_view builtin_text();

  /// Throws ConfigError naming the line on malformed input.
  static DeviceRegistry parse(std::istream& in);
  static DeviceRegistry parse_text(std::string_view text);

  std::optional<DeviceTypeFilter> find(std::string_view name) const;

  /// Accepts a registry name or a literal `l1.l2.l3` triple.
  DeviceTypeFilter resolve_filter(std::string_view name_or_triple) const;
  /// As resolve_filter, but the result must be concrete.
  DeviceType resolve_type(std::string_view name_or_triple) const;

  /// Reverse lookup for display; empty if the code has no name.
  std::string name_of(const DeviceTypeFilter& f) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, DeviceTypeFilter, std::less<>> entries_;
};

/// Parses a decimal `l1.l2.l3` triple. Returns nullopt if it is not one.
std::optional<DeviceTypeFilter> parse_filter_triple(std::string_view text);

}  // namespace quicktalk
