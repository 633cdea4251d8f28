#include "blinkspeed/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace blinkspeed {
namespace {

EyeLandmarks hexagon(Point2 p1, Point2 p2, Point2 p3, Point2 p4, Point2 p5, Point2 p6) {
  return EyeLandmarks{p1, p2, p3, p4, p5, p6};
}

EyeLandmarks reference_hexagon() {
  return hexagon({0, 0}, {1, 1}, {3, 1}, {4, 0}, {3, -1}, {1, -1});
}

TEST(EarOfEye, ReferenceHexagon) {
  EXPECT_DOUBLE_EQ(ear_of_eye(reference_hexagon()), 0.5);
}

TEST(EarOfEye, ScaleInvariance) {
  EyeLandmarks eye = reference_hexagon();
  for (Point2* p : {&eye.p1, &eye.p2, &eye.p3, &eye.p4, &eye.p5, &eye.p6}) {
    p->x *= 2.0;
    p->y *= 2.0;
  }
  EXPECT_DOUBLE_EQ(ear_of_eye(eye), 0.5);
}

TEST(EarOfEye, FullyClosedIsZero) {
  EyeLandmarks eye = hexagon({0, 0}, {1, 0}, {3, 0}, {4, 0}, {3, 0}, {1, 0});
  EXPECT_DOUBLE_EQ(ear_of_eye(eye), 0.0);
}

TEST(EarOfEye, ZeroWidthEyeIsDegenerate) {
  EyeLandmarks eye = reference_hexagon();
  eye.p4 = eye.p1;
  EXPECT_THROW(ear_of_eye(eye), DegenerateEyeError);
}

// EAR is a ratio of Euclidean distances, so any rotation + translation +
// uniform scale must leave it unchanged up to roundoff.
TEST(EarOfEye, SimilarityInvariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);

  for (int i = 0; i < 1000; ++i) {
    EyeLandmarks eye = hexagon({0, 0},
                               {1.0, unit(rng)},
                               {3.0, unit(rng)},
                               {4.0 + unit(rng), 0},
                               {3.0, -unit(rng)},
                               {1.0, -unit(rng)});
    const double base = ear_of_eye(eye);

    const double a = angle(rng), s = scale(rng);
    const double tx = shift(rng), ty = shift(rng);
    const double c = std::cos(a), sn = std::sin(a);
    EyeLandmarks moved = eye;
    for (Point2* p : {&moved.p1, &moved.p2, &moved.p3, &moved.p4, &moved.p5, &moved.p6}) {
      const double x = p->x, y = p->y;
      p->x = s * (c * x - sn * y) + tx;
      p->y = s * (sn * x + c * y) + ty;
    }
    const double transformed = ear_of_eye(moved);
    EXPECT_LT(std::abs(transformed - base) / base, 1e-9);
  }
}

TEST(EarOfFrame, MeanOfBothEyes) {
  LandmarkFrame frame;
  frame.timestamp = 1.25;
  frame.left = hexagon({0, 0}, {1, 0.8}, {3, 0.8}, {4, 0}, {3, -0.8}, {1, -0.8});   // 0.4
  frame.right = hexagon({0, 0}, {1, 0.6}, {3, 0.6}, {4, 0}, {3, -0.6}, {1, -0.6});  // 0.3
  const EarSample s = ear_of_frame(frame);
  EXPECT_DOUBLE_EQ(s.timestamp, 1.25);
  EXPECT_NEAR(s.ear, 0.35, 1e-15);
}

TEST(EarOfFrame, SingleEyeFallback) {
  LandmarkFrame frame;
  frame.left = reference_hexagon();
  frame.left.p4 = frame.left.p1;  // degenerate
  frame.right = hexagon({0, 0}, {1, 0.6}, {3, 0.6}, {4, 0}, {3, -0.6}, {1, -0.6});
  EXPECT_NEAR(ear_of_frame(frame).ear, 0.3, 1e-15);
}

TEST(EarOfFrame, IdenticalEyesKeepValue) {
  LandmarkFrame frame;
  frame.left = reference_hexagon();
  frame.right = reference_hexagon();
  EXPECT_DOUBLE_EQ(ear_of_frame(frame).ear, 0.5);
}

TEST(EarOfFrame, BothDegenerateThrows) {
  LandmarkFrame frame;
  frame.left.p4 = frame.left.p1;
  frame.right.p4 = frame.right.p1;
  EXPECT_THROW(ear_of_frame(frame), DegenerateEyeError);
}

TEST(EarOfFrame, LiesBetweenPerEyeValues) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> h(0.05, 1.2);
  for (int i = 0; i < 200; ++i) {
    LandmarkFrame frame;
    const double hl = h(rng), hr = h(rng);
    frame.left = hexagon({0, 0}, {1, hl}, {3, hl}, {4, 0}, {3, -hl}, {1, -hl});
    frame.right = hexagon({0, 0}, {1, hr}, {3, hr}, {4, 0}, {3, -hr}, {1, -hr});
    const double le = ear_of_eye(frame.left);
    const double re = ear_of_eye(frame.right);
    const double combined = ear_of_frame(frame).ear;
    EXPECT_GE(combined, std::min(le, re) - 1e-15);
    EXPECT_LE(combined, std::max(le, re) + 1e-15);
  }
}

TEST(EyeStateTest, HeuristicBounds) {
  EXPECT_EQ(eye_state(0.40), EyeState::Open);
  EXPECT_EQ(eye_state(0.10), EyeState::Closed);
  EXPECT_EQ(eye_state(0.25), EyeState::Intermediate);
  // boundaries are inclusive to Intermediate
  EXPECT_EQ(eye_state(0.35), EyeState::Intermediate);
  EXPECT_EQ(eye_state(0.15), EyeState::Intermediate);
}

TEST(EyeStateTest, MonotoneInEar) {
  auto rank = [](EyeState s) {
    switch (s) {
      case EyeState::Closed: return 0;
      case EyeState::Intermediate: return 1;
      case EyeState::Open: return 2;
    }
    return -1;
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ear(0.0, 0.6);
  for (int i = 0; i < 500; ++i) {
    double a = ear(rng), b = ear(rng);
    if (a > b) std::swap(a, b);
    EXPECT_LE(rank(eye_state(a)), rank(eye_state(b)));
  }
}

}  // namespace
}  // namespace blinkspeed
