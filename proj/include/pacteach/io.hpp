#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "pacteach/optimize.hpp"
#include "pacteach/types.hpp"

namespace pacteach {

// Malformed input files (JSON syntax, schema violations, out-of-range
// entries). Distinct from std::invalid_argument so callers can separate
// "your file is broken" from "your parameters are wrong".
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Canonical decimal rendering used in every file this library writes:
// %.12g. Writing then re-reading a double through this format and
// reserializing reproduces the same bytes, which is what makes instance
// files round-trip stable.
std::string format_double(double v);

// Instance file schema (JSON, schema_version 1):
//   {
//     "schema_version": 1,
//     "examples":    [<m example id strings>],
//     "concepts":    [<n concept id strings>],
//     "consistency": [<n rows of m 0/1 entries>],
//     "gamma":       [<n rows of m decimals in [0,1]>],
//     "target":      <concept id string>
//   }
// parse_instance reports offending locations by concept/example id;
// serialize_instance emits fields in the order above so equal instances
// serialize to equal bytes.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

// Plain JSON array-of-rows matrix, used to feed measured error rates
// into gen_multiples. Throws FormatError when the shape is not
// rows x cols or an entry falls outside [0, 1].
ArrayXXd load_gamma_matrix_file(const std::string& path, Index rows, Index cols);

enum class ReportFormat { Table, Json };

// The solver inputs worth echoing back in a report.
struct SolveEcho {
  std::optional<double> q;
  std::optional<double> p;
  std::optional<Index> k;
  std::optional<int> d;
  bool exact = false;
};

// Renders a solve result, echoing inputs and naming the good/bad
// concepts of the split the result was scored under. JSON fields are
// emitted in a fixed order so reports are byte-stable.
std::string render_solve_report(const Instance& inst, const SolveResult& result,
                                const GoodPartition& part, const SolveEcho& echo,
                                ReportFormat format);

// n x n concept-by-concept similarity table under the given mode, CSV
// with a header row. Entry (row i, column j) is the similarity of
// concept i to concept j; in employment mode row i uses concept i's own
// error rates, so the table need not be symmetric.
std::string similarity_csv(const Instance& inst, SimilarityMode mode);

}  // namespace pacteach
