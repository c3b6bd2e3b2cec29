#include <doctest.h>

#include <clocale>
#include <cmath>
#include <locale>
#include <numbers>
#include <sstream>

#include "gbwave/csv.hpp"
#include "gbwave/lattice.hpp"
#include "support.hpp"

using namespace gbwave;
using gbtest::interior_rel_diff;
using gbtest::random_field;

namespace {

// integer lattice -3..3 on h = 1
Grid unit_line() { return Grid(1.0, vec1(-3.0), {7, 1}); }

ComplexField from_coords(const Grid& g, auto&& fn) {
  ComplexField f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = fn(g.point(j));
  return f;
}

std::size_t node_at_zero(const Grid& g) { return static_cast<std::size_t>(std::lround(-g.lo(0) / g.h())); }

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("grid covering snaps to the lattice and validates input") {
    const Grid g = Grid::covering(0.25, vec1(-0.3), vec1(0.6));
    CHECK(g.lo(0) == -0.5);
    CHECK(g.hi(0) == 0.75);
    CHECK(g.count(0) == 6);
    CHECK_THROWS_AS(Grid(0.0, vec1(0.0), {3, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.1, Vec::Zero(3), {3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(g.count(1), std::out_of_range);
    const Grid g2(0.5, vec2(0.0, 1.0), {3, 4});
    CHECK(g2.size() == 12);
    CHECK(g2.stride(1) == 3);
    const auto idx = g2.unravel(7);
    CHECK(idx[0] == 1);
    CHECK(idx[1] == 2);
    CHECK(g2.point(7)[1] == 2.0);
  }

  TEST_CASE("field length must match the grid") {
    CHECK_THROWS_AS(ComplexField(unit_line(), ComplexField::Values::Zero(3)), std::invalid_argument);
  }

  TEST_CASE("forward difference") {
    const Grid g = unit_line();
    const auto sq = from_coords(g, [](const Vec& x) { return complex(x[0] * x[0]); });
    const std::size_t zero = node_at_zero(g);
    CHECK(forward_diff(sq, 0)[zero] == complex(1.0));
    CHECK_THROWS_AS(forward_diff(sq, 1), std::out_of_range);

    const auto constant = from_coords(g, [](const Vec&) { return complex(2.5, -1.0); });
    const auto d = forward_diff(constant, 0);
    for (std::size_t j = 0; j + 1 < g.size(); ++j) CHECK(d[j] == complex(0.0));

    const double h = 0.1, xi0 = 0.7;
    const Grid g32(h, vec1(0.0), {32, 1});
    const auto wave = from_coords(g32, [&](const Vec& x) { return std::exp(complex(0.0, xi0 * x[0])); });
    const auto dw = forward_diff(wave, 0);
    const complex factor = (std::exp(complex(0.0, xi0 * h)) - 1.0) / h;
    for (std::size_t j = 0; j + 1 < g32.size(); ++j) CHECK(std::abs(dw[j] - wave[j] * factor) < 1e-12);
  }

  TEST_CASE("backward difference") {
    const Grid g = unit_line();
    const auto sq = from_coords(g, [](const Vec& x) { return complex(x[0] * x[0]); });
    const std::size_t zero = node_at_zero(g);
    const auto d = backward_diff(sq, 0);
    CHECK(d[zero] == complex(-1.0));
    CHECK(d[zero + 1] == complex(1.0));
    // zero ghost below the first node
    CHECK(d[0] == complex(9.0));
    const auto constant = from_coords(g, [](const Vec&) { return complex(1.0, 1.0); });
    const auto dc = backward_diff(constant, 0);
    for (std::size_t j = 1; j < g.size(); ++j) CHECK(dc[j] == complex(0.0));
  }

  TEST_CASE("centered difference") {
    const Grid g(0.1, vec1(-1.0), {21, 1});
    const auto lin = from_coords(g, [](const Vec& x) { return complex(x[0]); });
    const auto d = centered_diff(lin, 0);
    for (std::size_t j = 1; j + 1 < g.size(); ++j) CHECK(std::abs(d[j] - 1.0) < 1e-12);
    const Grid u = unit_line();
    const auto sq = from_coords(u, [](const Vec& x) { return complex(x[0] * x[0]); });
    const auto ds = centered_diff(sq, 0);
    for (std::size_t j = 1; j + 1 < u.size(); ++j) CHECK(ds[j] == complex(2.0 * u.point(j)[0]));
  }

  TEST_CASE("laplacian is exact on quadratics") {
    const Grid g(0.1, vec1(-1.0), {21, 1});
    const auto affine = from_coords(g, [](const Vec& x) { return complex(3.0 * x[0] - 1.0, x[0]); });
    const auto sq = from_coords(g, [](const Vec& x) { return complex(x[0] * x[0]); });
    const auto la = discrete_laplacian(affine, 1.0);
    const auto ls = discrete_laplacian(sq, 1.0);
    for (std::size_t j = 1; j + 1 < g.size(); ++j) {
      CHECK(std::abs(la[j]) <= 1e-12);
      CHECK(std::abs(ls[j] - 2.0) <= 1e-12);
    }
    const Grid g2(0.125, vec2(-1.0, -0.5), {17, 13});
    const double c = 2.0;
    const auto q = from_coords(g2, [](const Vec& x) {
      return complex(x[0] * x[0] + 3.0 * x[0] * x[1] - 2.0 * x[1] * x[1] + x[1], 0.5 * x[0] * x[0]);
    });
    const auto lq = discrete_laplacian(q, c);
    for (std::size_t j = 0; j < g2.size(); ++j)
      if (g2.is_interior(j)) CHECK(std::abs(lq[j] - c * complex(2.0 - 4.0, 1.0)) <= 1e-12);
    CHECK_THROWS_AS(discrete_laplacian(q, 0.0), std::invalid_argument);
  }

  TEST_CASE("difference identities on random fields") {
    for (double h : {1.0, 0.1, 0.003}) {
      for (const Grid& g : {Grid(h, vec1(0.0), {40, 1}), Grid(h, vec2(0.0, 0.0), {12, 9})}) {
        const double c = 1.7;
        const auto f = random_field(g);
        const auto gg = random_field(g);
        ComplexField sum_fb(g), twice_c(g), diff_fb(g), cross(g);
        for (int a = 0; a < g.dim(); ++a) {
          const auto fp = forward_diff(f, a), fm = backward_diff(f, a);
          const auto gp = forward_diff(gg, a), gm = backward_diff(gg, a);
          sum_fb.values = fp.values + fm.values;
          twice_c.values = 2.0 * centered_diff(f, a).values;
          CHECK(interior_rel_diff(sum_fb, twice_c) <= 1e-13);
          diff_fb.values += fp.values - fm.values;
          cross.values += c * (fp.values.cwiseProduct(gp.values) + fm.values.cwiseProduct(gm.values));
        }
        const auto lap = discrete_laplacian(f, c);
        CHECK(interior_rel_diff(diff_fb, ComplexField(g, (h / c) * lap.values)) <= 1e-13);

        const ComplexField prod(g, f.values.cwiseProduct(gg.values));
        const auto lhs = discrete_laplacian(prod, c);
        const ComplexField rhs(g, f.values.cwiseProduct(discrete_laplacian(gg, c).values) +
                                      gg.values.cwiseProduct(lap.values) + cross.values);
        CHECK(interior_rel_diff(lhs, rhs) <= 1e-13);
      }
    }
  }

  TEST_CASE("operators are linear") {
    const Grid g(0.05, vec2(0.0, 0.0), {10, 11});
    const auto f = random_field(g), k = random_field(g);
    const complex alpha(0.3, -1.2), beta(-2.0, 0.5);
    const ComplexField mix(g, alpha * f.values + beta * k.values);
    auto combine = [&](const ComplexField& a, const ComplexField& b) {
      return ComplexField(g, alpha * a.values + beta * b.values);
    };
    auto close = [](const ComplexField& a, const ComplexField& b) {
      return (a.values - b.values).norm() <= 1e-13 * a.values.norm();
    };
    for (int a = 0; a < 2; ++a) {
      CHECK(close(forward_diff(mix, a), combine(forward_diff(f, a), forward_diff(k, a))));
      CHECK(close(backward_diff(mix, a), combine(backward_diff(f, a), backward_diff(k, a))));
      CHECK(close(centered_diff(mix, a), combine(centered_diff(f, a), centered_diff(k, a))));
    }
    CHECK(close(discrete_laplacian(mix, 0.7), combine(discrete_laplacian(f, 0.7), discrete_laplacian(k, 0.7))));
  }

  TEST_CASE("l2 norm") {
    CHECK(l2_norm(ComplexField(Grid(0.1, vec1(0.0), {5, 1}))) == 0.0);
    ComplexField one(Grid(0.5, vec1(0.0), {3, 1}));
    one[1] = 1.0;
    CHECK(l2_norm(one) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

    const Grid g = Grid::covering(0.01, vec1(-8.0), vec1(8.0));
    const auto gauss = from_coords(g, [](const Vec& x) { return complex(std::exp(-x[0] * x[0])); });
    const double exact = std::pow(std::numbers::pi / 2.0, 0.25);
    CHECK(exact == doctest::Approx(1.11951).epsilon(1e-5));
    CHECK(std::abs(l2_norm(gauss) - exact) <= 1e-12);

    const Grid r(0.2, vec2(0.0, 0.0), {6, 7});
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_field(r), b = random_field(r);
      const complex s(gbtest::uniform(-3, 3), gbtest::uniform(-3, 3));
      CHECK(l2_norm(ComplexField(r, s * a.values)) == doctest::Approx(std::abs(s) * l2_norm(a)).epsilon(1e-14));
      CHECK(l2_norm(ComplexField(r, a.values + b.values)) <= l2_norm(a) + l2_norm(b));
    }
  }

  TEST_CASE("semidiscrete energy") {
    const Grid g(1.0, vec1(0.0), {4, 1});
    ComplexField u(g), v(g);
    CHECK(semidiscrete_energy(u, v, 1.0) == 0.0);
    v[2] = 1.0;
    CHECK(semidiscrete_energy(u, v, 1.0) == 0.5);
    CHECK_THROWS_AS(semidiscrete_energy(u, ComplexField(Grid(0.5, vec1(0.0), {4, 1})), 1.0),
                    std::invalid_argument);
  }

  TEST_CASE("number formatting round-trips and ignores the locale") {
    struct comma : std::numpunct<char> {
      char do_decimal_point() const override { return ','; }
    };
    const std::locale old = std::locale::global(std::locale(std::locale::classic(), new comma));
    for (int i = 0; i < 200; ++i) {
      const double x = std::ldexp(gbtest::uniform(-1, 1), static_cast<int>(gbtest::uniform(-60, 60)));
      const std::string s = format_number(x);
      CHECK(s.find(',') == std::string::npos);
      CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.0) == "-2");
    std::locale::global(old);
  }

  TEST_CASE("field csv layout") {
    ComplexField f(Grid(0.5, vec2(0.0, 1.0), {2, 2}));
    f[3] = complex(1.5, -0.25);
    std::ostringstream out;
    write_field_csv(out, f);
    CHECK(out.str() ==
          "i0,i1,x0,x1,re,im\n0,0,0,1,0,0\n1,0,0.5,1,0,0\n0,1,0,1.5,0,0\n1,1,0.5,1.5,1.5,-0.25\n");
  }
}
