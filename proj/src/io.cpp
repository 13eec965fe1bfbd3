#include "pacteach/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pacteach/instance.hpp"

namespace pacteach {

namespace {

using nlohmann::json;

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

void append_id_list(std::string& out, const std::vector<std::string>& ids) {
  out += '[';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ", ";
    out += '"';
    out += escape_json(ids[i]);
    out += '"';
  }
  out += ']';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

const json& require_field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw FormatError(std::string("missing field '") + name + "'");
  return *it;
}

std::vector<std::string> parse_id_list(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) {
    throw FormatError(std::string("'") + name + "' must be a nonempty array of strings");
  }
  std::vector<std::string> ids;
  ids.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_string()) {
      throw FormatError(std::string("'") + name + "' must contain only strings");
    }
    ids.push_back(v.get<std::string>());
  }
  return ids;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string serialize_instance(const Instance& inst) {
  const Index n = inst.num_concepts();
  const Index m = inst.num_examples();
  std::string out;
  out.reserve(static_cast<std::size_t>(n * m * 8 + 256));
  out += "{\n  \"schema_version\": 1,\n  \"examples\": ";
  append_id_list(out, inst.example_ids);
  out += ",\n  \"concepts\": ";
  append_id_list(out, inst.concept_ids);
  out += ",\n  \"consistency\": [\n";
  for (Index c = 0; c < n; ++c) {
    out += "    [";
    for (Index x = 0; x < m; ++x) {
      if (x > 0) out += ", ";
      out += inst.consistency(c, x) ? '1' : '0';
    }
    out += c + 1 < n ? "],\n" : "]\n";
  }
  out += "  ],\n  \"gamma\": [\n";
  for (Index c = 0; c < n; ++c) {
    out += "    [";
    for (Index x = 0; x < m; ++x) {
      if (x > 0) out += ", ";
      out += format_double(inst.gamma(c, x));
    }
    out += c + 1 < n ? "],\n" : "]\n";
  }
  out += "  ],\n  \"target\": \"";
  out += escape_json(inst.concept_ids[static_cast<std::size_t>(inst.target)]);
  out += "\"\n}\n";
  return out;
}

Instance parse_instance(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw FormatError("instance file must be a JSON object");

  const json& version = require_field(j, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    throw FormatError("unsupported schema_version (expected 1)");
  }

  Instance inst;
  inst.example_ids = parse_id_list(require_field(j, "examples"), "examples");
  inst.concept_ids = parse_id_list(require_field(j, "concepts"), "concepts");
  const Index n = static_cast<Index>(inst.concept_ids.size());
  const Index m = static_cast<Index>(inst.example_ids.size());

  const json& cons = require_field(j, "consistency");
  if (!cons.is_array() || static_cast<Index>(cons.size()) != n) {
    throw FormatError("'consistency' must have one row per concept (" +
                      std::to_string(n) + " rows)");
  }
  inst.consistency.resize(n, m);
  for (Index c = 0; c < n; ++c) {
    const json& row = cons[static_cast<std::size_t>(c)];
    if (!row.is_array() || static_cast<Index>(row.size()) != m) {
      throw FormatError("consistency row for concept '" +
                        inst.concept_ids[static_cast<std::size_t>(c)] + "' must have " +
                        std::to_string(m) + " entries");
    }
    for (Index x = 0; x < m; ++x) {
      const json& v = row[static_cast<std::size_t>(x)];
      if (!v.is_number_integer() ||
          (v.get<int>() != 0 && v.get<int>() != 1)) {
        throw FormatError("consistency entry for concept '" +
                          inst.concept_ids[static_cast<std::size_t>(c)] +
                          "', example '" +
                          inst.example_ids[static_cast<std::size_t>(x)] +
                          "' must be 0 or 1");
      }
      inst.consistency(c, x) = v.get<int>();
    }
  }

  const json& gamma = require_field(j, "gamma");
  if (!gamma.is_array() || static_cast<Index>(gamma.size()) != n) {
    throw FormatError("'gamma' must have one row per concept (" + std::to_string(n) +
                      " rows)");
  }
  inst.gamma.resize(n, m);
  for (Index c = 0; c < n; ++c) {
    const json& row = gamma[static_cast<std::size_t>(c)];
    if (!row.is_array() || static_cast<Index>(row.size()) != m) {
      throw FormatError("gamma row for concept '" +
                        inst.concept_ids[static_cast<std::size_t>(c)] + "' must have " +
                        std::to_string(m) + " entries");
    }
    for (Index x = 0; x < m; ++x) {
      const json& v = row[static_cast<std::size_t>(x)];
      if (!v.is_number()) {
        throw FormatError("gamma entry for concept '" +
                          inst.concept_ids[static_cast<std::size_t>(c)] +
                          "', example '" +
                          inst.example_ids[static_cast<std::size_t>(x)] +
                          "' must be a number");
      }
      const double g = v.get<double>();
      if (!(g >= 0.0 && g <= 1.0)) {
        throw FormatError("gamma entry for concept '" +
                          inst.concept_ids[static_cast<std::size_t>(c)] +
                          "', example '" +
                          inst.example_ids[static_cast<std::size_t>(x)] +
                          "' is outside [0, 1]");
      }
      inst.gamma(c, x) = g;
    }
  }

  const json& target = require_field(j, "target");
  if (!target.is_string()) throw FormatError("'target' must be a concept id string");
  const std::string target_id = target.get<std::string>();
  bool found = false;
  for (Index c = 0; c < n; ++c) {
    if (inst.concept_ids[static_cast<std::size_t>(c)] == target_id) {
      inst.target = c;
      found = true;
      break;
    }
  }
  if (!found) throw FormatError("unknown target '" + target_id + "'");

  try {
    validate_instance(inst);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return inst;
}

Instance load_instance_file(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << serialize_instance(inst);
  if (!out) throw FormatError("failed writing '" + path + "'");
}

ArrayXXd load_gamma_matrix_file(const std::string& path, Index rows, Index cols) {
  const json j = parse_json(read_file(path));
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw FormatError(path + ": expected " + std::to_string(rows) +
                      " rows of error rates");
  }
  ArrayXXd out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw FormatError(path + ": row " + std::to_string(r) + " must have " +
                        std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw FormatError(path + ": entry (" + std::to_string(r) + ", " +
                          std::to_string(c) + ") must be a number");
      }
      const double g = v.get<double>();
      if (!(g >= 0.0 && g <= 1.0)) {
        throw FormatError(path + ": entry (" + std::to_string(r) + ", " +
                          std::to_string(c) + ") is outside [0, 1]");
      }
      out(r, c) = g;
    }
  }
  return out;
}

namespace {

const char* objective_name(Objective o) {
  switch (o) {
    case Objective::Probable: return "probable";
    case Objective::Approx: return "approx";
    case Objective::Size: return "size";
  }
  return "?";
}

const char* mode_name(SimilarityMode mode) {
  return mode == SimilarityMode::Identification ? "id" : "em";
}

}  // namespace

std::string render_solve_report(const Instance& inst, const SolveResult& result,
                                const GoodPartition& part, const SolveEcho& echo,
                                ReportFormat format) {
  const auto concept_name = [&](Index c) -> const std::string& {
    return inst.concept_ids[static_cast<std::size_t>(c)];
  };
  const auto example_name = [&](Index x) -> const std::string& {
    return inst.example_ids[static_cast<std::size_t>(x)];
  };

  if (format == ReportFormat::Json) {
    std::string out = "{\n";
    out += "  \"objective\": \"" + std::string(objective_name(result.objective)) + "\",\n";
    out += "  \"mode\": \"" + std::string(mode_name(result.mode)) + "\",\n";
    out += "  \"inputs\": {";
    bool first = true;
    const auto field = [&](const char* name, const std::string& value) {
      if (!first) out += ", ";
      out += std::string("\"") + name + "\": " + value;
      first = false;
    };
    if (echo.q) field("q", format_double(*echo.q));
    if (echo.p) field("p", format_double(*echo.p));
    if (echo.k) field("k", std::to_string(*echo.k));
    if (echo.d) field("d", std::to_string(*echo.d));
    if (echo.exact) field("exact", "true");
    out += "},\n";
    out += std::string("  \"feasible\": ") + (result.feasible ? "true" : "false") + ",\n";
    out += "  \"teaching_set\": [";
    for (std::size_t i = 0; i < result.teaching_set.items.size(); ++i) {
      const auto& item = result.teaching_set.items[i];
      if (i > 0) out += ", ";
      out += "{\"example\": \"" + escape_json(example_name(item.example)) +
             "\", \"label\": " + std::to_string(item.label) + "}";
    }
    out += "],\n";
    out += "  \"size\": " + std::to_string(result.teaching_set.size()) + ",\n";
    out += "  \"achieved_p\": " + format_double(result.achieved_p) + ",\n";
    out += "  \"achieved_q\": " + format_double(result.achieved_q) + ",\n";
    out += "  \"good\": [";
    for (std::size_t i = 0; i < part.good.size(); ++i) {
      if (i > 0) out += ", ";
      out += "\"" + escape_json(concept_name(part.good[i])) + "\"";
    }
    out += "],\n  \"bad\": [";
    for (std::size_t i = 0; i < part.bad.size(); ++i) {
      if (i > 0) out += ", ";
      out += "\"" + escape_json(concept_name(part.bad[i])) + "\"";
    }
    out += "],\n";
    out += "  \"subsets_evaluated\": " + std::to_string(result.subsets_evaluated) + ",\n";
    out += std::string("  \"budget_exhausted\": ") +
           (result.budget_exhausted ? "true" : "false") + ",\n";
    out += "  \"wall_seconds\": " + format_double(result.wall_seconds) + "\n";
    out += "}\n";
    return out;
  }

  std::ostringstream out;
  out << "objective:         " << objective_name(result.objective) << "\n";
  out << "mode:              " << mode_name(result.mode) << "\n";
  if (echo.q) out << "q:                 " << format_double(*echo.q) << "\n";
  if (echo.p) out << "p:                 " << format_double(*echo.p) << "\n";
  if (echo.k) out << "k:                 " << *echo.k << "\n";
  if (echo.d) out << "d:                 " << *echo.d << "\n";
  if (echo.exact) out << "exact:             yes\n";
  out << "feasible:          " << (result.feasible ? "yes" : "no") << "\n";
  out << "teaching set:      ";
  for (std::size_t i = 0; i < result.teaching_set.items.size(); ++i) {
    const auto& item = result.teaching_set.items[i];
    if (i > 0) out << ", ";
    out << "(" << example_name(item.example) << ", " << item.label << ")";
  }
  out << "\n";
  out << "size:              " << result.teaching_set.size() << "\n";
  out << "achieved p:        " << format_double(result.achieved_p) << "\n";
  out << "achieved q:        " << format_double(result.achieved_q) << "\n";
  out << "good concepts:     ";
  for (std::size_t i = 0; i < part.good.size(); ++i) {
    if (i > 0) out << ", ";
    out << concept_name(part.good[i]);
  }
  out << "\n";
  out << "bad concepts:      ";
  for (std::size_t i = 0; i < part.bad.size(); ++i) {
    if (i > 0) out << ", ";
    out << concept_name(part.bad[i]);
  }
  out << "\n";
  out << "subsets evaluated: " << result.subsets_evaluated << "\n";
  out << "budget exhausted:  " << (result.budget_exhausted ? "yes" : "no") << "\n";
  out << "wall seconds:      " << format_double(result.wall_seconds) << "\n";
  return out.str();
}

std::string similarity_csv(const Instance& inst, SimilarityMode mode) {
  const Index n = inst.num_concepts();
  std::string out = "concept";
  for (Index c = 0; c < n; ++c) {
    out += ',';
    out += inst.concept_ids[static_cast<std::size_t>(c)];
  }
  out += '\n';
  for (Index i = 0; i < n; ++i) {
    out += inst.concept_ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < n; ++j) {
      out += ',';
      out += format_double(mode == SimilarityMode::Identification
                               ? sim(inst, i, j)
                               : sim_l(inst, i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace pacteach
