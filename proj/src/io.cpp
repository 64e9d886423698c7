#include "biphoton/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "biphoton/errors.hpp"

namespace biphoton::io {

std::string format9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void write_csv(std::ostream& os, const SpectralAmplitude& f) {
  os << "omega,re,im\n";
  for (std::size_t k = 0; k < f.size(); ++k)
    os << format9(f.grid()[k]) << ',' << format9(f.values()[k].real()) << ',' << format9(f.values()[k].imag())
       << '\n';
}

void write_csv(std::ostream& os, const WignerMap& m) {
  os << "tau,mu,value\n";
  for (std::size_t j = 0; j < m.tau_grid.points(); ++j)
    for (std::size_t k = 0; k < m.mu_grid.points(); ++k)
      os << format9(m.tau_grid[j]) << ',' << format9(m.mu_grid[k]) << ','
         << format9(m.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))) << '\n';
}

void write_csv(std::ostream& os, const StftMap& m) {
  os << "tau,mu,re,im\n";
  for (std::size_t j = 0; j < m.tau_grid.points(); ++j)
    for (std::size_t k = 0; k < m.mu_grid.points(); ++k) {
      const cplx v = m.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      os << format9(m.tau_grid[j]) << ',' << format9(m.mu_grid[k]) << ',' << format9(v.real()) << ','
         << format9(v.imag()) << '\n';
    }
}

void write_csv(std::ostream& os, const CoincidenceTrace& t) {
  if (t.mu_grid) {
    os << "tau,mu,probability\n";
    for (std::size_t j = 0; j < t.tau_grid.points(); ++j)
      for (std::size_t k = 0; k < t.mu_grid->points(); ++k)
        os << format9(t.tau_grid[j]) << ',' << format9((*t.mu_grid)[k]) << ',' << format9(t.at(j, k)) << '\n';
  } else {
    os << "tau,probability\n";
    for (std::size_t j = 0; j < t.tau_grid.points(); ++j) os << format9(t.tau_grid[j]) << ',' << format9(t.at(j)) << '\n';
  }
}

void write_metadata(std::ostream& os, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

namespace {

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  fn(os);
  os.flush();
  if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace

template <typename T>
void write_csv_file(const std::filesystem::path& path, const T& value) {
  write_file(path, [&](std::ostream& os) { write_csv(os, value); });
}

template void write_csv_file(const std::filesystem::path&, const SpectralAmplitude&);
template void write_csv_file(const std::filesystem::path&, const WignerMap&);
template void write_csv_file(const std::filesystem::path&, const StftMap&);
template void write_csv_file(const std::filesystem::path&, const CoincidenceTrace&);

void write_metadata_file(const std::filesystem::path& path, const std::map<std::string, std::string>& kv) {
  write_file(path, [&](std::ostream& os) { write_metadata(os, kv); });
}

TraceTable read_trace_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw IoError(path.string() + " is empty");
  bool with_mu;
  if (line == "tau,probability")
    with_mu = false;
  else if (line == "tau,mu,probability")
    with_mu = true;
  else
    throw IoError(path.string() + ": unexpected header '" + line + "'");

  TraceTable t;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        cols.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (cols.size() != (with_mu ? 3u : 2u))
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    t.tau.push_back(cols[0]);
    if (with_mu) t.mu.push_back(cols[1]);
    t.probability.push_back(cols.back());
  }
  if (t.tau.empty()) throw IoError(path.string() + " has no data rows");
  return t;
}

}  // namespace biphoton::io
