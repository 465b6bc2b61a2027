#include "oplab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oplab {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quoted(const std::string& s) { return "\"" + json_escape(s) + "\""; }

std::string complex_json(Complex z) {
  return "[" + fmt17(z.real()) + "," + fmt17(z.imag()) + "]";
}

std::string entries_json(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ",";
    out += "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += complex_json(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

// M may legitimately be +infinity; JSON has no literal for it.
std::string number_or_null(double v) { return std::isfinite(v) ? fmt17(v) : "null"; }

std::string tolerances_json(const Tolerances& tol) {
  return "{\"eq_tol\":" + fmt17(tol.eq_tol) + ",\"psd_tol\":" + fmt17(tol.psd_tol) +
         ",\"spec_tol\":" + fmt17(tol.spec_tol) + ",\"margin_gate\":" + fmt17(tol.margin_gate) +
         "}";
}

Matrix entries_from_json(const nlohmann::json& entries, Eigen::Index rows, Eigen::Index cols,
                         const char* what) {
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows)
    throw ParseError(std::string(what) + ": 'entries' must be an array of " +
                     std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = entries[size_t(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError(std::string(what) + ": row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& cell = row[size_t(j)];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw ParseError(std::string(what) + ": entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") must be a [re, im] pair");
      const double re = cell[0].get<double>();
      const double im = cell[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw ParseError(std::string(what) + ": entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") is not finite");
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

nlohmann::json parse_document(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

std::string digest_matrices(std::initializer_list<const Matrix*> ms) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  const auto feed = [&hash](const std::string& s) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 0x100000001b3ull;
    }
  };
  for (const Matrix* m : ms) {
    feed(std::to_string(m->rows()) + "x" + std::to_string(m->cols()) + ";");
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index j = 0; j < m->cols(); ++j)
        feed(fmt17((*m)(i, j).real()) + "," + fmt17((*m)(i, j).imag()) + ";");
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string matrix_to_json(const Matrix& m) {
  return "{\"dim\":" + std::to_string(m.rows()) + ",\"entries\":" + entries_json(m) + "}";
}

Matrix matrix_from_json(const std::string& text) {
  const nlohmann::json doc = parse_document(text, "MatrixFile");
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries"))
    throw ParseError("MatrixFile: top level must be {\"dim\", \"entries\"}");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
    throw ParseError("MatrixFile: 'dim' must be a positive integer");
  const auto dim = static_cast<Eigen::Index>(doc["dim"].get<long long>());
  if (dim > 4096) throw ParseError("MatrixFile: dimension is implausibly large");
  return entries_from_json(doc["entries"], dim, dim, "MatrixFile");
}

Matrix matrix_from_file(const std::string& path) { return matrix_from_json(read_file(path)); }

std::string basis_to_json(const Matrix& m) {
  return "{\"rows\":" + std::to_string(m.rows()) + ",\"cols\":" + std::to_string(m.cols()) +
         ",\"entries\":" + entries_json(m) + "}";
}

Matrix basis_from_file(const std::string& path) {
  const nlohmann::json doc = parse_document(read_file(path), "BasisFile");
  if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") ||
      !doc.contains("entries"))
    throw ParseError("BasisFile: top level must be {\"rows\", \"cols\", \"entries\"}");
  if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer())
    throw ParseError("BasisFile: 'rows'/'cols' must be integers");
  const auto rows = static_cast<Eigen::Index>(doc["rows"].get<long long>());
  const auto cols = static_cast<Eigen::Index>(doc["cols"].get<long long>());
  if (rows < 1 || cols < 1 || rows > 4096 || cols > rows)
    throw ParseError("BasisFile: need 1 <= cols <= rows");
  return entries_from_json(doc["entries"], rows, cols, "BasisFile");
}

std::string certificate_to_json(const CommutationCertificate& cert) {
  std::string out = "{\"lambda\":" + complex_json(cert.lambda) +
                    ",\"modulus\":" + fmt17(cert.modulus()) +
                    ",\"residual\":" + fmt17(cert.residual) +
                    ",\"ab_nonzero\":" + (cert.ab_nonzero ? "true" : "false") +
                    ",\"degenerate\":" + (cert.degenerate ? "true" : "false") + ",\"unity_order\":";
  out += cert.unity_order ? std::to_string(*cert.unity_order) : "null";
  return out + "}";
}

std::string class_report_to_json(const ClassReport& report) {
  std::string out = "{\"kind\":\"class_report\",\"dim\":" + std::to_string(report.dim) +
                    ",\"op_norm\":" + fmt17(report.op_norm) + ",\"classes\":[";
  bool first = true;
  for (const auto& e : report.entries) {
    if (!first) out += ",";
    first = false;
    out += "{\"class\":" + quoted(e.class_id) + ",\"verdict\":" +
           quoted(std::string(to_string(e.verdict))) + ",\"margin\":" + fmt17(e.margin) +
           ",\"method\":" + quoted(e.method);
    if (e.params.p) out += ",\"p\":" + fmt17(*e.params.p);
    if (e.params.k) out += ",\"k\":" + std::to_string(*e.params.k);
    if (e.params.M) out += ",\"M\":" + number_or_null(*e.params.M);
    if (e.witness) {
      out += ",\"witness\":{\"violation\":" + fmt17(e.witness->violation) + ",\"vector\":[";
      for (Eigen::Index i = 0; i < e.witness->vector.size(); ++i) {
        if (i) out += ",";
        out += complex_json(e.witness->vector(i));
      }
      out += "]}";
    }
    if (!e.note.empty()) out += ",\"note\":" + quoted(e.note);
    out += "}";
  }
  return out + "]}";
}

std::string theorem_verdict_to_json(const TheoremVerdict& v) {
  std::string out = "{\"kind\":\"theorem_verdict\",\"theorem\":" + quoted(v.theorem_id) +
                    ",\"status\":" + quoted(std::string(to_string(v.status))) +
                    ",\"premises\":{";
  bool first = true;
  for (const auto& [name, margin] : v.premise_margins) {
    if (!first) out += ",";
    first = false;
    out += quoted(name) + ":" + fmt17(margin);
  }
  out += "},\"conclusion_margin\":" + fmt17(v.conclusion_margin) +
         ",\"inputs_digest\":" + quoted(v.inputs_digest);
  if (!v.notes.empty()) out += ",\"notes\":" + quoted(v.notes);
  return out + "}";
}

std::string suite_report_to_json(const SuiteReport& report) {
  std::string out = "{\"kind\":\"suite_report\",\"seed\":" + std::to_string(report.seed) +
                    ",\"trials\":" + std::to_string(report.trials) + ",\"dims\":[";
  for (size_t i = 0; i < report.dims.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(report.dims[i]);
  }
  out += "],\"passed\":" + std::string(report.passed() ? "true" : "false") + ",\"theorems\":[";
  bool first = true;
  for (const auto& [id, tally] : report.per_theorem) {
    if (!first) out += ",";
    first = false;
    out += "{\"theorem\":" + quoted(id) + ",\"confirmed\":" + std::to_string(tally.confirmed) +
           ",\"vacuous\":" + std::to_string(tally.vacuous) +
           ",\"violated\":" + std::to_string(tally.violated) +
           ",\"premise_hit_rate\":" + fmt17(tally.premise_hit_rate);
    if (tally.worst_trial >= 0) {
      out += ",\"worst_conclusion_margin\":" + fmt17(tally.worst_conclusion_margin) +
             ",\"worst_trial\":" + std::to_string(tally.worst_trial);
      if (tally.violated > 0) out += ",\"worst_instance\":" + quoted(tally.worst_instance);
    }
    out += "}";
  }
  return out + "]}";
}

std::string report_document(const Tolerances& tol, std::uint64_t seed,
                            const std::string& results_json_array) {
  return "{\"tool_version\":" + quoted(kToolVersion) + ",\"seed\":" + std::to_string(seed) +
         ",\"tolerances\":" + tolerances_json(tol) + ",\"results\":" + results_json_array + "}\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace oplab
