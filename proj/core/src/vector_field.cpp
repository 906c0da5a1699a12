#include "nullctl/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "nullctl/error.hpp"
#include "nullctl/linalg.hpp"

namespace nullctl {

VectorField VectorField::parse(std::span<const std::string> components) {
    const std::size_t n = components.size();
    if (n == 0)
        throw InvalidArgument("vector field needs at least one component");
    auto names = state_variable_names(n);
    auto with_time = names;
    with_time.emplace_back("t");

    std::vector<Expression> parsed;
    parsed.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto probe = Expression::parse(components[i], with_time);
        if (probe.depends_on(n))
            throw InvalidArgument("component f" + std::to_string(i + 1) +
                                  " depends on t; the drift must be autonomous");
        parsed.push_back(Expression::parse(components[i], names));
    }
    return VectorField(std::move(parsed));
}

VectorField::VectorField(std::vector<Expression> components) : components_(std::move(components)) {
    const std::size_t n = components_.size();
    if (n == 0)
        throw InvalidArgument("vector field needs at least one component");
    for (const auto& c : components_) {
        if (c.variables().size() != n)
            throw InvalidArgument("vector field component count must equal the number of state variables");
        for (std::size_t k = 0; k < n; ++k)
            if (c.variables()[k] == "t")
                throw InvalidArgument("vector field components must not reference t");
    }
    build_derivatives();
}

void VectorField::build_derivatives() {
    const std::size_t n = components_.size();
    first_.assign(n, {});
    second_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            first_[i].push_back(components_[i].derivative(j));
        second_[i].resize(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k <= j; ++k)
                second_[i][j].push_back(first_[i][j].derivative(k));
    }
}

Vector VectorField::eval(std::span<const double> x) const {
    Vector y(dimension());
    for (std::size_t i = 0; i < dimension(); ++i)
        y[i] = components_[i].eval(x);
    return y;
}

Matrix VectorField::jacobian(std::span<const double> x) const {
    const std::size_t n = dimension();
    Matrix j(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            j(r, c) = first_[r][c].eval(x);
    return j;
}

Matrix VectorField::hessian(std::size_t component, std::span<const double> x) const {
    const std::size_t n = dimension();
    if (component >= n)
        throw InvalidArgument("hessian component index out of range");
    Matrix h(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k <= j; ++k) {
            const double v = second_[component][j][k].eval(x);
            h(j, k) = v;
            h(k, j) = v;
        }
    return h;
}

std::vector<std::size_t> VectorField::hessian_support(std::size_t component) const {
    const std::size_t n = dimension();
    std::vector<std::size_t> support;
    for (std::size_t v = 0; v < n; ++v) {
        bool used = false;
        for (std::size_t j = 0; j < n && !used; ++j)
            for (std::size_t k = 0; k <= j && !used; ++k)
                used = second_.at(component)[j][k].depends_on(v);
        if (used)
            support.push_back(v);
    }
    return support;
}

bool VectorField::hessian_is_constant(std::size_t component) const { return hessian_support(component).empty(); }

bool VectorField::is_affine() const {
    const std::size_t n = dimension();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k <= j; ++k) {
                const auto& e = second_[i][j][k];
                if (!e.is_constant())
                    return false;
                const Vector origin(n, 0.0);
                if (e.eval(origin) != 0.0)
                    return false;
            }
    return true;
}

VectorField VectorField::shifted(std::span<const double> offset) const {
    if (offset.size() != dimension())
        throw InvalidArgument("shift offset dimension mismatch");
    std::vector<Expression> moved;
    moved.reserve(dimension());
    for (const auto& c : components_)
        moved.push_back(c.shifted(offset));
    return VectorField(std::move(moved));
}

Box Box::symmetric(std::size_t n, double half_width) {
    if (!(half_width > 0.0))
        throw InvalidArgument("box half width must be positive");
    return Box{std::vector<std::pair<double, double>>(n, {-half_width, half_width})};
}

bool Box::contains(std::span<const double> x) const {
    if (x.size() != bounds.size())
        return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < bounds[i].first || x[i] > bounds[i].second)
            return false;
    return true;
}

Box Box::scaled(double factor) const {
    Box b = *this;
    for (auto& [lo, hi] : b.bounds) {
        lo *= factor;
        hi *= factor;
    }
    return b;
}

Box Box::translated(std::span<const double> offset) const {
    if (offset.size() != bounds.size())
        throw InvalidArgument("box translation dimension mismatch");
    Box b = *this;
    for (std::size_t i = 0; i < offset.size(); ++i) {
        b.bounds[i].first += offset[i];
        b.bounds[i].second += offset[i];
    }
    return b;
}

namespace {

double checked_norm(const VectorField& f, std::size_t component, std::span<const double> x) {
    const double v = spectral_norm(f.hessian(component, x));
    if (!std::isfinite(v))
        throw DomainError("non-finite Hessian sample");
    return v;
}

std::size_t grid_points(std::size_t requested, std::size_t dims, std::size_t budget) {
    std::size_t p = std::max<std::size_t>(requested, 2);
    while (p > 3) {
        double total = 1.0;
        for (std::size_t d = 0; d < dims; ++d)
            total *= static_cast<double>(p);
        if (total <= static_cast<double>(budget))
            break;
        --p;
    }
    if (p % 2 == 0 && p > 2)
        --p;
    return p;
}

void validate_box(const VectorField& f, const Box& box) {
    if (box.dimension() != f.dimension())
        throw InvalidArgument("box dimension does not match the vector field");
    for (const auto& [lo, hi] : box.bounds)
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw InvalidArgument("box bounds must be finite with lo <= hi");
    const Vector origin(f.dimension(), 0.0);
    if (!box.contains(origin))
        throw InvalidArgument("box must contain the origin");
}

struct Candidate {
    double value;
    Vector point;
};

// Compass search restricted to the support axes and clamped to the box.
Candidate refine_point(const VectorField& f, std::size_t component, const Box& box,
                       const std::vector<std::size_t>& axes, Candidate start, const Vector& initial_step) {
    Vector step = initial_step;
    Candidate best = std::move(start);
    for (int iter = 0; iter < 400; ++iter) {
        bool improved = false;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const std::size_t v = axes[a];
            for (double dir : {1.0, -1.0}) {
                Vector trial = best.point;
                trial[v] = std::clamp(trial[v] + dir * step[a], box.bounds[v].first, box.bounds[v].second);
                if (trial[v] == best.point[v])
                    continue;
                double value = 0.0;
                try {
                    value = checked_norm(f, component, trial);
                } catch (const DomainError&) {
                    continue;
                }
                if (value > best.value) {
                    best = {value, std::move(trial)};
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            bool all_small = true;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                step[a] *= 0.5;
                const double width = box.bounds[axes[a]].second - box.bounds[axes[a]].first;
                if (step[a] > 1e-12 * std::max(width, 1.0))
                    all_small = false;
            }
            if (all_small)
                break;
        }
    }
    return best;
}

} // namespace

double hessian_norm_sup(const VectorField& f, std::size_t component, const Box& box, const RemainderOptions& options) {
    validate_box(f, box);
    const std::size_t n = f.dimension();
    const auto axes = f.hessian_support(component);
    Vector centre(n, 0.0);

    if (axes.empty())
        return checked_norm(f, component, centre);

    const std::size_t p = grid_points(options.points_per_axis, axes.size(), options.max_points);
    Vector spacing(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const auto [lo, hi] = box.bounds[axes[a]];
        spacing[a] = p > 1 ? (hi - lo) / static_cast<double>(p - 1) : 0.0;
    }

    constexpr std::size_t kKeep = 4;
    std::vector<Candidate> top;
    std::vector<std::size_t> index(axes.size(), 0);
    Vector x(n, 0.0);
    for (;;) {
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto [lo, hi] = box.bounds[axes[a]];
            x[axes[a]] = index[a] + 1 == p ? hi : lo + spacing[a] * static_cast<double>(index[a]);
        }
        const double value = checked_norm(f, component, x);
        if (top.size() < kKeep || value > top.back().value) {
            top.push_back({value, x});
            std::sort(top.begin(), top.end(), [](const Candidate& l, const Candidate& r) { return l.value > r.value; });
            if (top.size() > kKeep)
                top.pop_back();
        }
        std::size_t a = 0;
        while (a < axes.size() && ++index[a] == p)
            index[a++] = 0;
        if (a == axes.size())
            break;
    }

    double best = top.front().value;
    if (options.refine)
        for (const auto& c : top)
            best = std::max(best, refine_point(f, component, box, axes, c, spacing).value);
    return best;
}

double remainder_coefficient(const VectorField& f, const Box& box, const RemainderOptions& options) {
    validate_box(f, box);
    if (options.override_value) {
        if (!(*options.override_value >= 0.0) || !std::isfinite(*options.override_value))
            throw InvalidArgument("c_R override must be a finite non-negative number");
        return *options.override_value;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < f.dimension(); ++i)
        total += 0.5 * hessian_norm_sup(f, i, box, options);
    return total * options.safety_factor;
}

} // namespace nullctl
