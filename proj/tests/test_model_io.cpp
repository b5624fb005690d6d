#include <gtest/gtest.h>

#include <sstream>

#include "motqc/model.hpp"

using namespace motqc;

namespace {

void expect_same_model(const AnyonModel& a, const AnyonModel& b) {
  ASSERT_EQ(a.rank(), b.rank());
  EXPECT_EQ(a.name(), b.name());
  for (Charge x : a.charges()) {
    EXPECT_EQ(a.label(x), b.label(x));
    EXPECT_EQ(a.dual(x), b.dual(x));
    EXPECT_EQ(a.qdim(x), b.qdim(x));
    for (Charge y : a.charges()) {
      EXPECT_EQ(a.products(x, y), b.products(x, y));
      for (Charge z : a.charges()) EXPECT_EQ(a.r(x, y, z), b.r(x, y, z));
    }
  }
  const auto cs = a.charges();
  for (Charge p : cs)
    for (Charge q : cs)
      for (Charge r : cs)
        for (Charge s : cs)
          for (Charge e : cs)
            for (Charge f : cs) EXPECT_EQ(a.f(p, q, r, s, e, f), b.f(p, q, r, s, e, f));
}

}  // namespace

TEST(ModelFile, RoundTripIsExact) {
  for (const auto& m : {load_builtin("fibonacci"), load_builtin("ising"), load_builtin("su2_k", 3)}) {
    std::stringstream ss;
    write_model(ss, *m);
    const AnyonModel back(parse_model(ss));
    expect_same_model(*m, back);
    EXPECT_EQ(back.metadata(), m->metadata());
  }
}

TEST(ModelFile, AliasesResolve) {
  std::istringstream in(R"(model tiny
charges 0 1
alias vac 0
alias t 1
dual 0 0
dual t t
qdim 0 1
qdim t 1.6180339887498949
fuse vac t -> t
)");
  const ModelData d = parse_model(in);
  EXPECT_EQ(d.aliases.at("t"), 1);
  EXPECT_EQ(d.aliases.at("vac"), 0);
  EXPECT_TRUE(d.fusion(0, 1, 1));
  EXPECT_EQ(d.dual[1], 1);
}

TEST(ModelFile, ErrorsCarryLineNumbers) {
  std::istringstream bad_number("charges 0\ndual 0 0\nqdim 0 one\n");
  try {
    parse_model(bad_number);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::istringstream unknown("charges 0\nfoo bar\n");
  EXPECT_THROW(parse_model(unknown), ParseError);
  std::istringstream missing_dual("charges 0 1\ndual 0 0\nqdim 0 1\nqdim 1 1\n");
  EXPECT_THROW(parse_model(missing_dual), ParseError);
  std::istringstream no_charges("model x\n");
  EXPECT_THROW(parse_model(no_charges), ParseError);
  std::istringstream bad_label("charges 0\ndual 0 q\n");
  EXPECT_THROW(parse_model(bad_label), ParseError);
}

TEST(ModelFile, LoadRejectsInconsistentModel) {
  EXPECT_THROW(load_model_file(std::string(MOTQC_TEST_DATA) + "/perturbed_fibonacci.model"), ModelError);
  EXPECT_THROW(load_model_file(std::string(MOTQC_TEST_DATA) + "/malformed.model"), ParseError);
  EXPECT_THROW(load_model_file(std::string(MOTQC_TEST_DATA) + "/does_not_exist.model"), ParseError);
  const auto ok = load_model_file(std::string(MOTQC_TEST_DATA) + "/fibonacci.model");
  expect_same_model(*ok, *load_builtin("fibonacci"));
}
