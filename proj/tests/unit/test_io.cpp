#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fibrilgeom/io.hpp"
#include "fixtures.hpp"

using namespace fibrilgeom;

TEST(Io, HopMatrixCsvLayout) {
  auto a = DiscreteCurve::from_points({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)});
  auto b = DiscreteCurve::from_points({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(4, 0, 0)});
  auto m = truncated_hop_matrix(a, b);
  auto labels = io::curve_labels(a, 3);
  EXPECT_EQ(labels[0], " :1");
  std::string csv = io::hop_matrix_csv(m, labels);
  EXPECT_EQ(csv, "residue, :1, :2, :3\n :1,0.000,1.000,2.000\n :2,1.000,0.000,1.000\n :3,2.000,1.000,0.000\n");
  EXPECT_EQ(io::binary_map_csv(threshold_map(m, 1.5), labels),
            "residue, :1, :2, :3\n :1,0,0,1\n :2,0,0,0\n :3,1,0,0\n");
  auto j = io::binary_map_json(threshold_map(m, 1.5), labels);
  EXPECT_EQ(j["matrix"][0][2], 1);
  EXPECT_EQ(j["cutoff"], 1.5);
}

TEST(Io, BackboneLabelsCarryAtomClass) {
  DiscreteCurve c({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)},
                  {{'A', 5, std::nullopt, AtomClass::N}, {'A', 5, std::nullopt, AtomClass::CA}, {'A', 5, 'B', AtomClass::C}});
  auto labels = io::curve_labels(c, 3);
  EXPECT_EQ(labels[0], "A:5:N");
  EXPECT_EQ(labels[2], "A:5B:C");
}

TEST(Io, DiagramCsvRoundTripIsExact) {
  std::mt19937_64 rng(61);
  std::vector<Vec3> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(fixture::gaussian(rng, 3));
  auto d = vr_persistence(pts, 2, 1e9);
  std::string csv = io::diagram_csv(d);
  EXPECT_TRUE(csv.starts_with("dimension,birth,death\n"));
  EXPECT_NE(csv.find(",inf\n"), std::string::npos);
  std::istringstream in(csv);
  EXPECT_EQ(io::parse_diagram_csv(in).points, d.points);
}

TEST(Io, DiagramCsvRejectsGarbage) {
  for (const char* bad : {"dimension,birth,death\n0,1\n", "0,x,2\n", "0,3,1\n"}) {
    std::istringstream in(bad);
    try {
      io::parse_diagram_csv(in);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedRecord);
    }
  }
}

TEST(Io, GeometryCsvMarksDegenerateRows) {
  std::vector<VertexGeometry> e(2);
  e[0].label = {'A', 3, std::nullopt, AtomClass::CA};
  e[0].curvature = 0.5;
  e[0].torsion = -0.25;
  e[1].label = {'A', 3, std::nullopt, AtomClass::C};
  e[1].reason = DegeneracyReason::CollinearWindow;
  EXPECT_EQ(io::geometry_csv(e),
            "chain,residue_seq,atom_class,curvature,torsion,degenerate_reason\nA,3,CA,0.5,-0.25,\nA,3,C,,,collinear_window\n");
}

TEST(Io, SummaryJsonHasSixteenStatistics) {
  std::vector<VertexGeometry> e(3);
  for (int i = 0; i < 3; ++i) {
    e[i].label.atom_class = AtomClass::CA;
    e[i].curvature = 1.0 + i;
    e[i].torsion = -0.5 * i;
  }
  auto j = io::summary_json(summarize(e));
  for (const char* key : {"mean_abs_curvature", "mean_abs_torsion", "var_abs_curvature", "var_abs_torsion"}) {
    ASSERT_TRUE(j.contains(key));
    EXPECT_EQ(j[key].size(), 4u);
  }
  EXPECT_EQ(j["mean_abs_curvature"]["CA"], 2.0);
  EXPECT_EQ(j["var_abs_curvature"]["all"], 1.0);
  EXPECT_TRUE(j["mean_abs_torsion"]["N"].is_null());
}

TEST(Io, RegressionJsonHeadline) {
  RegressionResult r;
  r.p_value = 0.04;
  r.p_value_negative = 0.02;
  EXPECT_EQ(io::regression_json(r, false)["p_value"], 0.04);
  auto one = io::regression_json(r, true);
  EXPECT_EQ(one["p_value"], 0.02);
  EXPECT_EQ(one["headline"], "one-sided-negative");
  EXPECT_EQ(one["p_value_two_sided"], 0.04);
}
