#ifndef OPLAB_IO_HPP
#define OPLAB_IO_HPP

// JSON surfaces. Writers emit a fixed key order with every number printed
// to 17 significant digits, so identical inputs give byte-identical
// documents and doubles round-trip exactly. Readers validate shape and
// finiteness and throw ParseError with a diagnostic.

#include <cstdint>
#include <string>

#include "oplab/classes.hpp"
#include "oplab/pairs.hpp"
#include "oplab/theorems.hpp"
#include "oplab/types.hpp"

namespace oplab {

std::string fmt17(double v);

/// FNV-1a over the 17-digit entry stream; stable instance fingerprint.
std::string digest_matrices(std::initializer_list<const Matrix*> ms);

// MatrixFile: {"dim": n, "entries": [[[re, im], ...], ...]}
std::string matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);
Matrix matrix_from_file(const std::string& path);

// Rectangular basis files for restriction inputs:
// {"rows": n, "cols": k, "entries": [...]}
std::string basis_to_json(const Matrix& m);
Matrix basis_from_file(const std::string& path);

std::string certificate_to_json(const CommutationCertificate& cert);

std::string class_report_to_json(const ClassReport& report);
std::string theorem_verdict_to_json(const TheoremVerdict& verdict);
std::string suite_report_to_json(const SuiteReport& report);

/// ReportDocument wrapper: {"tool_version", "seed", "tolerances", "results"}.
std::string report_document(const Tolerances& tol, std::uint64_t seed,
                            const std::string& results_json_array);

void write_file(const std::string& path, const std::string& content);

}  // namespace oplab

#endif  // OPLAB_IO_HPP
