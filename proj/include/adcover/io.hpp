#ifndef ADCOVER_IO_HPP
#define ADCOVER_IO_HPP

#include <optional>
#include <string>

#include "adcover/instance.hpp"
#include "adcover/odt.hpp"
#include "adcover/strategy.hpp"

namespace adcover {

/// Self-describing single-document formats. Serialization is canonical
/// (fixed key order, stable number formatting), so equal values produce
/// byte-identical text and integer-weighted instances round-trip exactly.

std::string serialize_instance(const CoverInstance& inst);
CoverInstance parse_instance(const std::string& text);

std::string serialize_gst(const GstInstance& inst);
GstInstance parse_gst(const std::string& text);

std::string serialize_strategy(const StrategyTree& tree);
StrategyTree parse_strategy(const std::string& text);

std::string serialize_odt(const OdtInstance& inst);
OdtInstance parse_odt(const std::string& text);

std::string serialize_test_strategy(const TestStrategy& s);
TestStrategy parse_test_strategy(const std::string& text);

/// Kind sniffing for CLI convenience: instances vs ODT vs strategies.
enum class DocumentKind { CoverInstance, OdtInstance, Strategy, TestStrategy, Unknown };
DocumentKind sniff_kind(const std::string& text);

struct RunReport {
  std::string instance_digest;
  std::string solver;
  std::string objective;
  double value = 0.0;
  std::optional<double> oracle_value;
  std::optional<double> ratio;
  std::optional<double> bound_ratio;  // theoretical bound on value/oracle
  double wall_ms = 0.0;
  std::optional<std::uint64_t> seed;
};

std::string serialize_report(const RunReport& report);

/// FNV-1a hash of the canonical serialization, as "fnv1a:<hex>".
std::string digest(const std::string& text);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace adcover

#endif  // ADCOVER_IO_HPP
