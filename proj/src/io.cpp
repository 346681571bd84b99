#include "optoscatter/io.hpp"

#include <cstdio>
#include <fstream>

namespace optoscatter {

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

json document_header(const char* kind, const json& provenance) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = kind;
  doc["provenance"] = provenance;
  return doc;
}

}  // namespace

json to_json(const ModelParams& p) {
  json j{{"omega_m", p.omega_m}, {"g1", p.g1}, {"g2", p.g2}, {"gamma_c", p.gamma_c}};
  j["omega_c"] = p.omega_c ? json(*p.omega_c) : json(nullptr);
  return j;
}

json to_json(const WavepacketParams& wp) {
  return {{"delta1", wp.delta1}, {"delta2", wp.delta2}, {"epsilon", wp.epsilon}};
}

json to_json(const MechanicalInitState& s) {
  json j;
  if (s.kind == MechanicalInitState::Kind::Pure) {
    j["kind"] = "pure";
    json amps = json::array();
    for (const auto& a : s.amplitudes) amps.push_back({a.real(), a.imag()});
    j["amplitudes"] = amps;
  } else {
    j["kind"] = "mixed";
    j["probabilities"] = s.probabilities;
  }
  return j;
}

json to_json(const Truncation& t) {
  return {{"fock", t.fock}, {"j_max", t.j_max}, {"n0_max", t.n0_max}};
}

json to_json(const TruncationRecord& r) {
  return {{"truncation", to_json(r.trunc)},
          {"checked_points", r.checked_points},
          {"max_rel_change", r.max_rel_change},
          {"tolerance", r.tolerance},
          {"converged", r.converged}};
}

json to_json(const ResonanceLine& line) {
  return {{"kind", to_string(line.kind)}, {"a", line.a},       {"b", line.b},
          {"c", line.c},                  {"s", line.s},       {"s_prime", line.s_prime},
          {"j", line.j},                  {"label", line.label()}};
}

json to_json(const OracleComparison& c) {
  return {{"rel_l2", c.rel_l2},
          {"rel_linf", c.rel_linf},
          {"residual_intracavity", c.residual_intracavity},
          {"norm_error", c.norm_error},
          {"points", c.points}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_csv(const std::filesystem::path& path, const SpectrumGrid& grid) {
  auto out = open_for_writing(path);
  out << "dp,dq,S\n";
  for (std::size_t i = 0; i < grid.p_axis.size(); ++i)
    for (std::size_t k = 0; k < grid.q_axis.size(); ++k)
      out << format_double(grid.p_axis[i]) << ',' << format_double(grid.q_axis[k]) << ','
          << format_double(grid.at(i, k)) << '\n';
}

void write_diagonal_csv(const std::filesystem::path& path,
                        const std::vector<std::pair<double, double>>& diagonal) {
  auto out = open_for_writing(path);
  out << "delta,S\n";
  for (const auto& [x, s] : diagonal) out << format_double(x) << ',' << format_double(s) << '\n';
}

void write_fc_table_csv(const std::filesystem::path& path, const FCTable& table, int max_index) {
  if (max_index > table.max_index()) throw DomainError("FC table is smaller than the requested dump");
  auto out = open_for_writing(path);
  out << "m,j,n,s,re,im\n";
  for (int m = 0; m <= kMaxPhotons; ++m)
    for (int j = 0; j <= max_index; ++j)
      for (int n = 0; n <= kMaxPhotons; ++n)
        for (int s = 0; s <= max_index; ++s) {
          const cplx v = table(m, j, n, s);
          out << m << ',' << j << ',' << n << ',' << s << ',' << format_double(v.real()) << ','
              << format_double(v.imag()) << '\n';
        }
}

json grid_document(const SpectrumGrid& grid, const json& provenance) {
  json doc = document_header("spectrum_grid", provenance);
  doc["source"] = grid.source;
  doc["p_axis"] = grid.p_axis;
  doc["q_axis"] = grid.q_axis;
  doc["values"] = grid.values;
  doc["max_value"] = grid.max_value();
  return doc;
}

json diagonal_document(const std::vector<std::pair<double, double>>& diagonal, const json& provenance) {
  json doc = document_header("diagonal_spectrum", provenance);
  std::vector<double> x, s;
  for (const auto& [a, b] : diagonal) {
    x.push_back(a);
    s.push_back(b);
  }
  doc["delta"] = x;
  doc["values"] = s;
  return doc;
}

json resonance_document(const std::vector<ResonanceLine>& lines, const json& provenance) {
  json doc = document_header("resonance_lines", provenance);
  json arr = json::array();
  for (const auto& line : lines) arr.push_back(to_json(line));
  doc["lines"] = arr;
  return doc;
}

SpectrumGrid grid_from_document(const json& doc) {
  try {
    if (doc.at("kind") != "spectrum_grid") throw DomainError("document is not a spectrum grid");
    SpectrumGrid g;
    g.source = doc.at("source").get<std::string>();
    g.p_axis = doc.at("p_axis").get<std::vector<double>>();
    g.q_axis = doc.at("q_axis").get<std::vector<double>>();
    g.values = doc.at("values").get<std::vector<double>>();
    if (g.values.size() != g.p_axis.size() * g.q_axis.size())
      throw DomainError("grid values do not match the axes");
    return g;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed grid document: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto out = open_for_writing(path);
  out << doc.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

}  // namespace optoscatter
