#include "gibbslab/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gibbslab/errors.hpp"

namespace gibbslab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error("malformed JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw config_error(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw config_error("unknown key '" + it.key() + "' in " + where);
}

Potential potential_from_json(const json& j) {
  check_keys(j, {"kind", "value", "values", "probs", "alphabet", "depth", "table", "p",
                 "exponent", "v0", "theta"},
             "potential");
  if (!j.contains("kind")) throw config_error("potential needs a kind tag");
  const std::string kind = j.at("kind").get<std::string>();
  const int asize = j.value("alphabet", 2);
  Potential p = [&]() {
    if (kind == "constant") return Potential::constant(Alphabet{asize}, j.at("value").get<double>());
    if (kind == "depth-1") return Potential::depth1(Alphabet{asize}, j.at("values").get<std::vector<double>>());
    if (kind == "bernoulli") {
      if (j.at("probs").is_number()) {
        const double q = j.at("probs").get<double>();
        return Potential::bernoulli({1.0 - q, q});  // probability of symbol 1
      }
      return Potential::bernoulli(j.at("probs").get<std::vector<double>>());
    }
    if (kind == "markov")
      return Potential::markov(Alphabet{asize}, j.at("depth").get<int>(),
                               j.at("table").get<std::vector<double>>());
    if (kind == "long-range-ising") return Potential::long_range_ising(j.value("p", 4.0));
    if (kind == "pollicott") return Potential::pollicott(j.value("exponent", 2.0), j.value("v0", 2.0));
    if (kind == "custom")
      return Potential::custom(Alphabet{asize}, j.at("depth").get<int>(),
                               j.at("table").get<std::vector<double>>());
    throw config_error("unknown potential kind '" + kind + "'");
  }();
  if (j.contains("theta")) p.set_theta(j.at("theta").get<double>());
  return p;
}

json potential_to_json(const Potential& p) {
  json j;
  j["kind"] = p.kind_name();
  j["alphabet"] = p.alphabet().size;
  j["theta"] = p.theta();
  switch (p.kind()) {
    case Potential::Kind::constant:
      j["value"] = p.eval(Word{0}.span());
      break;
    case Potential::Kind::depth1:
      j["values"] = p.table();
      break;
    case Potential::Kind::markov:
    case Potential::Kind::custom:
      j["depth"] = p.table_depth();
      j["table"] = p.table();
      break;
    case Potential::Kind::long_range_ising:
      j["p"] = p.ising_power();
      break;
    case Potential::Kind::pollicott:
      j["exponent"] = p.pollicott_exponent();
      j["v0"] = p.pollicott_v0();
      break;
  }
  return j;
}

json spectral_to_json(const SpectralData& s) {
  json j;
  j["alphabet"] = s.alphabet.size;
  j["depth"] = s.depth;
  j["theta"] = s.theta;
  j["lambda"] = s.lambda;
  j["pressure"] = s.pressure;
  j["residual"] = s.residual;
  j["iterations"] = s.iterations;
  return j;
}

namespace {

void write_provenance_header(std::ofstream& out, const json& provenance) {
  out << "# provenance: " << provenance.dump() << "\n";
  out << "# timestamp: " << iso8601_now() << "\n";
}

}  // namespace

void write_mu_csv(const std::filesystem::path& path, const SpectralData& s, const json& provenance) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  write_provenance_header(out, provenance);
  out << "word,index,mass\n";
  for (std::uint64_t i = 0; i < s.mu.size(); ++i) {
    const Word w = index_word(s.alphabet, i, s.depth);
    for (Symbol sym : w) out << static_cast<int>(sym);
    out << "," << i << "," << format_double(s.mu[i]) << "\n";
  }
}

void write_table_csv(const std::filesystem::path& path, const Table& table, const json& provenance) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  write_provenance_header(out, provenance);
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << table.columns[c] << (c + 1 < table.columns.size() ? "," : "");
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

CsvFile read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path.string());
  CsvFile csv;
  std::string line;
  bool have_provenance = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# provenance: ", 0) == 0) {
      csv.provenance = json::parse(line.substr(14));
      have_provenance = true;
      continue;
    }
    if (line.rfind("#", 0) == 0) continue;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (!have_header) {
      while (std::getline(ss, cell, ',')) csv.columns.push_back(cell);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    csv.rows.push_back(std::move(row));
  }
  if (!have_provenance)
    throw config_error("refusing unprovenanced table " + path.string());
  return csv;
}

void write_paths_text(const std::filesystem::path& path, const std::vector<Trajectory>& paths,
                      const Alphabet& a) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  const bool digits = a.size <= 10;
  for (const Trajectory& t : paths) {
    bool first = true;
    for (Symbol s : t.symbols) {
      if (digits) {
        out << static_cast<int>(s);
      } else {
        if (!first) out << ' ';
        out << static_cast<int>(s);
      }
      first = false;
    }
    out << "\n";
  }
}

std::vector<Word> read_paths_text(const std::filesystem::path& path, const Alphabet& a) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path.string());
  std::vector<Word> out;
  std::string line;
  const bool digits = a.size <= 10;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Symbol> syms;
    if (digits) {
      syms.reserve(line.size());
      for (char c : line) {
        if (c < '0' || c > '9') throw config_error("bad symbol character in " + path.string());
        syms.push_back(static_cast<Symbol>(c - '0'));
      }
    } else {
      std::stringstream ss(line);
      int v;
      while (ss >> v) syms.push_back(static_cast<Symbol>(v));
    }
    for (Symbol s : syms)
      if (s >= a.size) throw config_error("symbol out of alphabet range in " + path.string());
    out.push_back(Word(std::move(syms)));
  }
  return out;
}

void write_plan_csv(const std::filesystem::path& path, const TransportPlan& plan,
                    const json& provenance) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  write_provenance_header(out, provenance);
  out << "from,to,mass\n";
  for (const PlanEntry& e : plan.entries)
    out << e.from << "," << e.to << "," << format_double(e.mass) << "\n";
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace gibbslab
