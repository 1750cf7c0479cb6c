#ifndef GIBBSLAB_IO_HPP
#define GIBBSLAB_IO_HPP

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/markov.hpp"
#include "gibbslab/potential.hpp"
#include "gibbslab/transfer.hpp"
#include "gibbslab/transport.hpp"

namespace gibbslab {

using json = nlohmann::json;

// Full-precision decimal representation (%.17g): CSV payloads round-trip.
std::string format_double(double v);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

// Strict-config helper: rejects keys outside `allowed`.
void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where);

Potential potential_from_json(const json& j);
json potential_to_json(const Potential& p);

json spectral_to_json(const SpectralData& s);
// CSV of mu over A^k: word,index,mass
void write_mu_csv(const std::filesystem::path& path, const SpectralData& s, const json& provenance);

// One table of an experiment run.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// CSV layout: "# provenance: <json>" line, "# timestamp: <iso8601>" line,
// a header row, then full-precision rows. Reruns are bit-identical apart
// from the timestamp line.
void write_table_csv(const std::filesystem::path& path, const Table& table, const json& provenance);

struct CsvFile {
  json provenance;  // parsed from the provenance header line
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Reads a table written by write_table_csv. Throws config_error when the
// provenance line is missing (unprovenanced tables are refused).
CsvFile read_table_csv(const std::filesystem::path& path);

// Trajectories as raw symbol text, one path per line (digits for |A| <= 10).
void write_paths_text(const std::filesystem::path& path, const std::vector<Trajectory>& paths,
                      const Alphabet& a);
std::vector<Word> read_paths_text(const std::filesystem::path& path, const Alphabet& a);

// Sparse triplet CSV of a transport plan: from,to,mass.
void write_plan_csv(const std::filesystem::path& path, const TransportPlan& plan,
                    const json& provenance);

std::string iso8601_now();

}  // namespace gibbslab

#endif
