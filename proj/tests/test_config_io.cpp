#include "dwb/config.hpp"
#include "dwb/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

using namespace dwb;

TEST(Config, MinimalSimulate)
{
  auto plan = parse_config("n = 3\np = 2\neps = 1\n");
  ASSERT_EQ(plan.runs.size(), 1u);
  EXPECT_EQ(plan.runs[0].id, "run");
  EXPECT_EQ(plan.runs[0].kind, RunKind::simulate);
  auto const &sim = std::get<SimulateRun>(plan.runs[0].body);
  EXPECT_EQ(sim.problem.dim.n(), 3);
  EXPECT_EQ(sim.problem.p, 2.0);
}

TEST(Config, EmptyPlan)
{
  EXPECT_TRUE(parse_config("").runs.empty());
  EXPECT_TRUE(parse_config("# only a comment\n\n").runs.empty());
}

TEST(Config, RejectsSubcriticalExponentBelowOne)
{
  try
  {
    parse_config("p = 0.5\n");
    FAIL() << "accepted p = 0.5";
  }
  catch (ConfigError const &e)
  {
    EXPECT_NE(std::string(e.what()).find("p must exceed 1"), std::string::npos) << e.what();
    EXPECT_EQ(e.key(), "p");
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Config, RejectsDuplicateSections)
{
  EXPECT_THROW(parse_config("[a]\nn = 3\n[a]\nn = 1\n"), ConfigError);
}

TEST(Config, RejectsDuplicateKeys)
{
  EXPECT_THROW(parse_config("n = 3\nn = 2\n"), ConfigError);
}

TEST(Config, RejectsUnknownKey)
{
  try
  {
    parse_config("n = 3\n\nbogus = 1\n");
    FAIL();
  }
  catch (ConfigError const &e)
  {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.key(), "bogus");
  }
}

TEST(Config, RejectsKeyForOtherKind)
{
  EXPECT_THROW(parse_config("[s]\nkind = testfn\neps = 1\n"), ConfigError);
}

TEST(Config, RejectsMalformedValues)
{
  EXPECT_THROW(parse_config("n = three\n"), ConfigError);
  EXPECT_THROW(parse_config("p = 2x\n"), ConfigError);
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_config("[s]\nname = x\n"), ConfigError);
}

TEST(Config, TheoremSweepExpands)
{
  auto plan = parse_config("name = sweep\nn = 3\n[base]\np = 1.5, 2, 2.3\neps = 0.5, 1, 2\n");
  EXPECT_EQ(plan.name, "sweep");
  ASSERT_EQ(plan.runs.size(), 9u);
  std::set<std::string> ids;
  for (auto const &r : plan.runs)
    ids.insert(r.id);
  EXPECT_EQ(ids.size(), 9u);
}

TEST(Config, ListsOnlyWhereAllowed)
{
  EXPECT_NO_THROW(parse_config("[g]\nkind = ode_scan\na = 1, 2\nq = 0\np = 2, 3\n"));
  EXPECT_THROW(parse_config("[s]\nh = 1e-2, 2e-2\n"), ConfigError);
}

TEST(Config, DefaultKindApplies)
{
  auto plan = parse_config("n = 2\n", RunKind::testfn);
  ASSERT_EQ(plan.runs.size(), 1u);
  EXPECT_EQ(plan.runs[0].kind, RunKind::testfn);
}

TEST(Config, ResolvedConfigRoundTrips)
{
  auto plan = parse_config("n = 3\np = 2.25\n");
  std::string text;
  for (auto const &[k, v] : resolved_config(plan.runs[0]))
    if (k != "run")
      text += k + " = " + v + "\n";
  auto again = parse_config(text);
  EXPECT_EQ(resolved_config(again.runs[0]), resolved_config(plan.runs[0]));
}

TEST(FormatDouble, ShortestRoundTrip)
{
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(1e-300), "1e-300");
}

TEST(Csv, HeaderAndEcho)
{
  CsvDocument doc({{"n", "3"}, {"p", "2"}}, {"t", "F0"});
  doc.add_row({"0", "1.5"});
  EXPECT_EQ(doc.text(), "# n=3\n# p=2\nt,F0\n0,1.5\n");
  EXPECT_ANY_THROW(doc.add_row({"1"}));
}

TEST(Csv, SplitLine)
{
  auto cells = split_csv_line("a,b,,c");
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[2], "");
}

TEST(Io, AtomicWriteCreatesDirectories)
{
  auto dir = std::filesystem::temp_directory_path() / "dwb_io_test";
  std::filesystem::remove_all(dir);
  auto path = dir / "x" / "y.txt";
  write_atomic(path, "hello\n");
  EXPECT_EQ(read_file(path), "hello\n");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  write_atomic(path, "again\n");
  EXPECT_EQ(read_file(path), "again\n");
  std::filesystem::remove_all(dir);
}
