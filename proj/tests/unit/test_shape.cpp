#include <gtest/gtest.h>

#include <limits>

#include "kfjlt/shape.hpp"

using kfjlt::Index;
using kfjlt::MultiIndex;
using kfjlt::Shape;

namespace {

// Reference enumeration: odometer with mode 1 turning fastest.
std::vector<MultiIndex> enumerate(const Shape& shape) {
  std::vector<MultiIndex> out;
  MultiIndex mi(shape.degree(), 0);
  for (Index count = 0; count < shape.total(); ++count) {
    out.push_back(mi);
    for (std::size_t k = 0; k < mi.size(); ++k) {
      if (++mi[k] < shape.dim(k)) break;
      mi[k] = 0;
    }
  }
  return out;
}

}  // namespace

TEST(Shape, TotalAndParse) {
  const Shape s = Shape::parse("125x125");
  EXPECT_EQ(s.degree(), 2u);
  EXPECT_EQ(s.total(), 15625u);
  EXPECT_EQ(s.to_string(), "125x125");
  EXPECT_EQ(Shape::parse("7").total(), 7u);
  EXPECT_THROW(Shape::parse("12xx4"), std::invalid_argument);
  EXPECT_THROW(Shape::parse(""), std::invalid_argument);
}

TEST(Shape, RejectsInvalid) {
  EXPECT_THROW(Shape(std::vector<Index>{}), std::domain_error);
  EXPECT_THROW(Shape({3, 0, 2}), std::domain_error);
  const Index big = Index{1} << 40;
  EXPECT_THROW(Shape({big, big}), std::domain_error);
}

TEST(Shape, WithoutAndStride) {
  const Shape s({3, 4, 5});
  EXPECT_EQ(s.stride(0), 1u);
  EXPECT_EQ(s.stride(2), 12u);
  EXPECT_EQ(s.without(1), Shape({3, 5}));
  EXPECT_THROW(Shape({4}).without(0), std::domain_error);
}

TEST(LinearIndex, WorkedExamples) {
  EXPECT_EQ(kfjlt::linear_index(Shape({7}), MultiIndex{5}), 5u);
  EXPECT_EQ(kfjlt::linear_index(Shape({3, 4}), MultiIndex{1, 2}), 7u);
  EXPECT_EQ(kfjlt::linear_index(Shape({125, 125}), MultiIndex{124, 124}), 15624u);
  EXPECT_THROW(kfjlt::linear_index(Shape({3, 4}), MultiIndex{3, 0}), std::domain_error);
  EXPECT_THROW(kfjlt::linear_index(Shape({3, 4}), MultiIndex{1}), std::domain_error);
}

TEST(MultiIndex, WorkedExamples) {
  EXPECT_EQ(kfjlt::multi_index(Shape({7}), 5), (MultiIndex{5}));
  EXPECT_EQ(kfjlt::multi_index(Shape({3, 4}), 7), (MultiIndex{1, 2}));
  EXPECT_EQ(kfjlt::multi_index(Shape({2, 2, 2}), 6), (MultiIndex{0, 1, 1}));
  EXPECT_THROW(kfjlt::multi_index(Shape({3, 4}), 12), std::domain_error);
}

TEST(LinearIndex, BijectiveAgainstEnumeration) {
  for (const Shape& shape : {Shape({7}), Shape({3, 4}), Shape({2, 2, 2}), Shape({4, 1, 5, 3}),
                             Shape({10, 10, 10}), Shape({100, 100})}) {
    const auto all = enumerate(shape);
    ASSERT_EQ(all.size(), shape.total());
    for (Index i = 0; i < shape.total(); ++i) {
      ASSERT_EQ(kfjlt::linear_index(shape, all[i]), i) << shape.to_string();
      ASSERT_EQ(kfjlt::multi_index(shape, i), all[i]) << shape.to_string();
    }
  }
}

TEST(LinearIndex, ModeOneFastest) {
  const Shape shape({5, 3, 4});
  for (Index i = 0; i < shape.total(); ++i) {
    MultiIndex mi = kfjlt::multi_index(shape, i);
    if (mi[0] + 1 < shape.dim(0)) {
      ++mi[0];
      EXPECT_EQ(kfjlt::linear_index(shape, mi), i + 1);
    }
  }
}
