#include <gtest/gtest.h>

#include <cstdio>

#include "hypkz/report.hpp"

using namespace hypkz;

TEST(Config, ParsesComplexNumbersAndLists) {
  EXPECT_EQ(parse_cplx("(1.5,-2)"), cplx(1.5, -2.0));
  EXPECT_EQ(parse_cplx("0.25"), cplx(0.25, 0.0));
  EXPECT_THROW(parse_cplx("(1,2) x"), Error);
  CVec v = parse_cvec("(1,0) (0,1)  -3");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[1], cplx(0.0, 1.0));
  EXPECT_EQ(v[2], cplx(-3.0, 0.0));
  EXPECT_THROW(parse_cvec("(1,0) oops"), Error);
}

TEST(Config, KeysAndValidation) {
  RunConfig c;
  apply_key(c, "L", "3");
  apply_key(c, "tol", "1e-9");
  apply_key(c, "m", "2");
  apply_key(c, "z", "(1.6,0.2) (1.65,-0.3)");
  apply_key(c, "lambda", "(-2.5,0.1) (-2.45,-0.15)");
  EXPECT_EQ(c.L, 3);
  EXPECT_TRUE(c.L_given);
  EXPECT_EQ(c.m, 1);
  EXPECT_DOUBLE_EQ(c.quad.tol, 1e-9);
  EXPECT_NO_THROW(validate_config(c));
  EXPECT_THROW(apply_key(c, "levels", "3"), Error);
  EXPECT_THROW(apply_key(c, "L", "three"), Error);
  EXPECT_THROW(apply_key(c, "m", "0"), Error);
  apply_key(c, "m", "3");
  EXPECT_THROW(validate_config(c), Error);
  RunConfig d = c;
  d.m = -1;
  d.point.p = {3.0, 0.0};
  EXPECT_THROW(validate_config(d), Error);
  EXPECT_THROW(parse_transform("21x12"), Error);
  EXPECT_TRUE(parse_transform("id").is_identity());
}

TEST(Config, ReadsFileWithComments) {
  std::string path = ::testing::TempDir() + "hypkz_cfg_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment line\n\ncommand = scan   # trailing comment\nL=2\nseed = 42\n";
  }
  RunConfig c;
  read_config_file(c, path);
  EXPECT_EQ(c.command, "scan");
  EXPECT_EQ(c.L, 2);
  EXPECT_EQ(c.seed, 42u);
  {
    std::ofstream f(path);
    f << "command scan\n";
  }
  EXPECT_THROW(read_config_file(c, path), Error);
  std::remove(path.c_str());
}

TEST(Report, VerdictsAndSerialization) {
  EXPECT_EQ(below("a", "x", 1e-12, 1e-10).verdict, Verdict::PASS);
  EXPECT_EQ(below("a", "x", std::nan(""), 1e-10).verdict, Verdict::FAIL);
  EXPECT_EQ(at_least("b", "x", 2.5, 2.0).verdict, Verdict::PASS);
  Report rep;
  rep.config = {{"command", "qkz-check"}};
  rep.add(below("ok", "anchor one", 1e-12, 1e-10));
  EXPECT_FALSE(rep.any_fail());
  rep.add(flag("bad", "anchor \"two\"", false, "detail"));
  EXPECT_TRUE(rep.any_fail());
  std::string s = rep.serialize();
  EXPECT_NE(s.find("# config command = qkz-check"), std::string::npos);
  EXPECT_NE(s.find("record name=ok anchor=\"anchor one\""), std::string::npos);
  EXPECT_NE(s.find("anchor=\"anchor \\\"two\\\"\""), std::string::npos);
  EXPECT_NE(s.find("verdict=FAIL"), std::string::npos);
  int records = 0;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) records += line.rfind("record ", 0) == 0;
  EXPECT_EQ(records, 2);
  EXPECT_NE(rep.summary_table().find("1 pass, 1 fail, 0 warn"), std::string::npos);
}
