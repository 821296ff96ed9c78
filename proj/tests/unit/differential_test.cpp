#include <map>
#include <random>

#include <gtest/gtest.h>

#include "differential.hpp"
#include "query_gen.hpp"
#include "render.hpp"

namespace lineage_forge::testing {
namespace {

void expect_sound(const DifferentialReport& report) {
  EXPECT_GT(report.checked, 0u);
  EXPECT_GT(report.changed_outputs, 0u) << "perturbations never changed an output; the oracle is vacuous";
  for (std::size_t i = 0; i < report.failures.size() && i < 10; ++i) ADD_FAILURE() << report.failures[i];
  EXPECT_EQ(report.failures.size(), 0u);
}

TEST(Differential, DeclaredSchemaIsSound) {
  DifferentialOptions options;
  options.seed = 11;
  options.queries = 400;
  options.max_rows = 20;
  expect_sound(run_differential(options));
}

TEST(Differential, ObservedSchemaIsSound) {
  DifferentialOptions options;
  options.seed = 23;
  options.queries = 400;
  options.max_rows = 20;
  options.declared_schema = false;
  const auto report = run_differential(options);
  expect_sound(report);
  EXPECT_LT(report.skipped, report.queries);
}

// Discarding referenced sets must surface violations, otherwise the oracle
// could not tell a filter's columns apart from unrelated ones.
TEST(Differential, DetectsMissingReferencedColumns) {
  DifferentialOptions options;
  options.seed = 11;
  options.queries = 100;
  options.max_rows = 20;
  options.drop_referenced = true;
  const auto report = run_differential(options);
  EXPECT_GT(report.checked, 0u);
  EXPECT_FALSE(report.failures.empty());
}

// The generated stream exercises every construct the oracle is meant to cover.
TEST(Differential, GeneratorCoversTheSubset) {
  std::map<std::string, int> seen;
  const std::vector<std::string> needles{" JOIN ",   " LEFT JOIN ", " CROSS JOIN ", " UNION ",    " INTERSECT ",
                                         " EXCEPT ", "WITH ",       " GROUP BY ",   " HAVING ",   "DISTINCT ",
                                         "EXISTS ",  " IN (",       " ORDER BY ",   " LIMIT ",    "CASE ",
                                         "CAST(",    "(SELECT ",    ") AS r",       "count(*)",   " WHERE "};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    const auto schema = random_schema(rng, 1);
    QueryGenerator gen(schema, rng());
    const std::string sql = render(gen.query());
    for (const auto& n : needles) {
      if (sql.find(n) != std::string::npos) ++seen[n];
    }
  }
  for (const auto& n : needles) EXPECT_GE(seen[n], 3) << "construct rarely generated: '" << n << "'";
}

}  // namespace
}  // namespace lineage_forge::testing
