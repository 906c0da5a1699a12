#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "nullctl/nullctl.hpp"

using namespace nullctl;

namespace {

const std::vector<std::string> kField{"x2/(1+x2^2) + x1 + x2", "x1^2 - x1 + 3*x2"};

CertificationProblem example(double M_d, double eta) {
    CertificationProblem p;
    p.f = VectorField::parse(kField);
    p.B = Matrix::identity(2);
    p.bound = {M_d, eta};
    p.c_R_override = 1.72855;
    return p;
}

CertifyOptions worked_point() {
    CertifyOptions o;
    o.gamma0 = 4.0;
    o.poles = std::vector<Complex>{-11.0, -10.0};
    o.omega = 2.0;
    return o;
}

void BM_FieldEval(benchmark::State& state) {
    const VectorField f = VectorField::parse(kField);
    std::vector<double> x{0.3, -0.7};
    for (auto _ : state) {
        x[0] += 1e-9;
        benchmark::DoNotOptimize(f.eval(x));
    }
}
BENCHMARK(BM_FieldEval);

void BM_Jacobian(benchmark::State& state) {
    const VectorField f = VectorField::parse(kField);
    const std::vector<double> x{0.3, -0.7};
    for (auto _ : state)
        benchmark::DoNotOptimize(f.jacobian(x));
}
BENCHMARK(BM_Jacobian);

void BM_Eigen(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = std::sin(static_cast<double>(3 * i + 7 * j + 1));
    for (auto _ : state)
        benchmark::DoNotOptimize(eigen(a));
}
BENCHMARK(BM_Eigen)->Arg(2)->Arg(4)->Arg(8);

void BM_RemainderCoefficient(benchmark::State& state) {
    const VectorField f = VectorField::parse(kField);
    RemainderOptions o;
    o.points_per_axis = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(remainder_coefficient(f, Box::symmetric(2, 10), o));
}
BENCHMARK(BM_RemainderCoefficient)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_CertifyFixed(benchmark::State& state) {
    const auto p = example(0.01, 2.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(certify(p, worked_point()));
}
BENCHMARK(BM_CertifyFixed);

void BM_CertifyAuto(benchmark::State& state) {
    const auto p = example(0.0, 0.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(certify(p, {}));
}
BENCHMARK(BM_CertifyAuto)->Unit(benchmark::kMillisecond);

void BM_SimulateClosedLoop(benchmark::State& state) {
    const auto p = example(0.0, 0.0);
    const Certificate c = certify(p, worked_point());
    const std::vector<double> x0{0.06, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_closed_loop(p, c, x0, DisturbanceModel::none()));
}
BENCHMARK(BM_SimulateClosedLoop)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
