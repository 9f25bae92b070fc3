#include "pcapp/errors.hpp"
#include "pcapp/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace pcapp::harness {

namespace {

// Up to 6 significant digits; NaN is written as "nan".
std::string g6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string f3(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IOError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.preset << ',' << r.method << ',' << r.n << ',' << r.d << ',' << g6(r.aspect_ratio)
        << ',';
    if (r.s) out << *r.s;
    out << ',' << r.trial << ',' << g6(r.dist) << ',' << g6(r.elapsed_seconds) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << r.preset << ',' << r.method << ',' << g6(r.aspect_ratio) << ',' << f3(r.mean_dist)
        << ',' << f3(r.sd_dist) << ',' << r.trials << ',' << r.failed << '\n';
  }
}

void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_records_csv(out, records); });
}

void emit_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_summary_csv(out, rows); });
}

}  // namespace pcapp::harness
