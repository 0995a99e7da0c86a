#include <gtest/gtest.h>

#include "hkpot/documents.hpp"

using namespace hkpot;
using nlohmann::ordered_json;

TEST(MatrixDocument, RoundTrip) {
  Rng rng(1);
  const auto x = random_orbit_element(JordanType({3, 2, 2}), AlgebraKind::make(Family::SO, 7), rng);
  const MatrixDocument doc = document_from_element(x, JordanType({3, 2, 2}));
  const std::string text = to_json(doc).dump(2);
  const MatrixDocument back = parse_matrix_document(text);
  EXPECT_EQ(back.n, 7);
  EXPECT_EQ(back.algebra, "so");
  EXPECT_EQ(back.form, "identity");
  EXPECT_EQ((back.entries - x.matrix).norm(), 0.0);  // bit-exact
  const OrbitElement y = document_to_element(back);
  EXPECT_EQ(y.algebra, x.algebra);
}

TEST(MatrixDocument, RealEntriesAndDefaults) {
  const auto doc = parse_matrix_document(R"({"n": 2, "algebra": "sl", "entries": [[0, 1], [0, 0]]})");
  EXPECT_EQ(doc.form, "identity");
  EXPECT_EQ(doc.entries(0, 1), Complex(1.0));
  EXPECT_NO_THROW(document_to_element(doc));
}

TEST(MatrixDocument, ParseErrors) {
  EXPECT_THROW(parse_matrix_document("{"), InputError);
  EXPECT_THROW(parse_matrix_document("[]"), InputError);
  EXPECT_THROW(parse_matrix_document(R"({"n": 2, "algebra": "sl", "entries": [[0, 1]]})"), InputError);
  EXPECT_THROW(parse_matrix_document(R"({"n": 1, "algebra": "sl", "entries": [["x"]]})"), InputError);
  EXPECT_THROW(parse_matrix_document(R"({"algebra": "sl", "entries": [[0]]})"), InputError);
  EXPECT_THROW(parse_matrix_document(R"({"n": 1, "algebra": "sl", "entries": [[0]], "jordan_type": [0]})"),
               InputError);
}

TEST(MatrixDocument, MembershipErrors) {
  auto doc = parse_matrix_document(R"({"n": 2, "algebra": "so", "entries": [[0, 1], [0, 0]]})");
  EXPECT_THROW(document_to_element(doc), MembershipError);
  doc = parse_matrix_document(R"({"n": 2, "algebra": "sl", "entries": [[0, 1], [0, 0]], "jordan_type": [1, 1]})");
  EXPECT_THROW(document_to_element(doc), MembershipError);
  doc = parse_matrix_document(R"({"n": 2, "algebra": "sl", "form": "antidiagonal", "entries": [[0, 1], [0, 0]]})");
  EXPECT_THROW(document_to_element(doc), InputError);
  doc = parse_matrix_document(R"({"n": 2, "algebra": "gl", "entries": [[0, 1], [0, 0]]})");
  EXPECT_THROW(document_to_element(doc), InputError);
}

TEST(MatrixDocument, SymplecticForm) {
  const auto x = jordan_representative(JordanType({2, 1, 1}), AlgebraKind::make(Family::SP, 4));
  const auto doc = document_from_element(x);
  EXPECT_EQ(doc.form, "symplectic");
  EXPECT_NO_THROW(document_to_element(parse_matrix_document(to_json(doc).dump())));
}

TEST(ReportDocument, NumbersRoundTripLosslessly) {
  Rng rng(2);
  const auto x = random_orbit_element(JordanType({3, 1, 1}), AlgebraKind::make(Family::SO, 5), rng);
  const PotentialReport rep = compute_all(x);
  const ordered_json j = report_to_json(rep, {{"seed", 2}});
  const ordered_json back = ordered_json::parse(j.dump());
  for (const auto& [name, m] : rep.methods)
    if (m.status == "ok") EXPECT_EQ(back["methods"][name]["rho"].get<double>(), m.rho) << name;
  EXPECT_EQ(back["invariants"]["c2"].get<double>(), rep.invariants.c2);
  EXPECT_EQ(back["input"]["seed"], 2);
  EXPECT_EQ(back["jordan_type"], (std::vector<int>{3, 1, 1}));
  EXPECT_TRUE(back.contains("lift_spectrum"));
  EXPECT_EQ(j.dump(), back.dump());
}
