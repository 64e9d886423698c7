#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "biphoton/interferometers.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/transforms.hpp"

namespace biphoton::io {

/// Shortest round-trippable form at 9 significant digits ("%.9g").
std::string format9(double v);

void write_csv(std::ostream& os, const SpectralAmplitude& f);  // omega,re,im
void write_csv(std::ostream& os, const WignerMap& m);          // tau,mu,value
void write_csv(std::ostream& os, const StftMap& m);            // tau,mu,re,im
void write_csv(std::ostream& os, const CoincidenceTrace& t);   // tau[,mu],probability
void write_metadata(std::ostream& os, const std::map<std::string, std::string>& kv);  // key=value lines

/// File variants; throw IoError when the file cannot be written.
template <typename T>
void write_csv_file(const std::filesystem::path& path, const T& value);
void write_metadata_file(const std::filesystem::path& path, const std::map<std::string, std::string>& kv);

struct TraceTable {
  std::vector<double> tau;
  std::vector<double> mu;  // empty for 1D traces
  std::vector<double> probability;
};

/// Parses a `tau[,mu],probability` file. Throws IoError on unreadable or malformed input.
TraceTable read_trace_csv(const std::filesystem::path& path);

}  // namespace biphoton::io
