// Timing comparison of the OpenMP kernels against their serial reference
// twins. Results are bit-identical between the two modes; only wall time may
// differ.

#include <chrono>
#include <cstdio>
#include <random>

#include "hardy/dual_system.hpp"
#include "hardy/interpolation.hpp"
#include "hardy/kernels.hpp"
#include "hardy/parallel.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/sequences.hpp"

using namespace hardy;

namespace {

struct Timing {
    double serial = 0.0;
    double parallel = 0.0;
    bool identical = true;
};

template <typename Fn>
double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, const Timing& t) {
    std::printf("%-28s %10.3f ms %10.3f ms %7.2fx   %s\n", name, t.serial * 1e3,
                t.parallel * 1e3, t.serial / std::max(t.parallel, 1e-12),
                t.identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");
    std::printf("threads available: %d\n", max_threads());

    // 1. L^p norm accumulation over a large circle rule
    {
        const auto rule = QuadratureRule::build(1, 8); // 16384 nodes
        const Point a({{0.9, 0.0}});
        const auto f = [&](std::span<const cplx> z) { return cauchy_kernel(a, z); };
        Timing t;
        double vs = 0.0, vp = 0.0;
        set_default_exec(Exec::serial);
        t.serial = timed([&] {
            for (int rep = 0; rep < 50; ++rep) vs = lp_norm(f, 3.0, rule);
        });
        set_default_exec(Exec::parallel);
        t.parallel = timed([&] {
            for (int rep = 0; rep < 50; ++rep) vp = lp_norm(f, 3.0, rule);
        });
        t.identical = vs == vp;
        row("lp_norm (16k nodes x50)", t);
    }

    // 2. lattice-rule construction for the 3-sphere
    {
        RuleOptions opts;
        opts.allow_qmc = true;
        Timing t;
        cplx check_s, check_p;
        set_default_exec(Exec::serial);
        t.serial = timed([&] {
            const auto rule = QuadratureRule::build(2, 4, opts);
            check_s = rule.node(rule.size() / 2)[0];
        });
        set_default_exec(Exec::parallel);
        t.parallel = timed([&] {
            const auto rule = QuadratureRule::build(2, 4, opts);
            check_p = rule.node(rule.size() / 2)[0];
        });
        t.identical = check_s == check_p;
        row("lattice rule build (4.2M)", t);
    }

    // 3. dual-system norms (blocked family accumulation)
    {
        GeneratorSpec g;
        g.kind = GeneratorSpec::Kind::radial;
        g.ratio = 0.5;
        g.count = 24;
        const auto S = generate_sequence(g);
        const auto rule = QuadratureRule::build(1, 5);
        Timing t;
        double ns = 0.0, np = 0.0;
        set_default_exec(Exec::serial);
        t.serial = timed([&] { ns = dual_bound_constant(dual_system_hp(S, 4.0, rule)); });
        set_default_exec(Exec::parallel);
        t.parallel = timed([&] { np = dual_bound_constant(dual_system_hp(S, 4.0, rule)); });
        t.identical = ns == np;
        row("dual system (N=24, L5)", t);
    }

    // 4. extension-operator trials
    {
        GeneratorSpec g;
        g.kind = GeneratorSpec::Kind::radial;
        g.ratio = 0.5;
        g.count = 20;
        const auto S = generate_sequence(g);
        const auto rule = QuadratureRule::build(1, 5);
        const auto es = exponent_split(2.0, 4.0);
        const auto ds = dual_system_hp(S, es.p, rule);
        Timing t;
        double cs = 0.0, cp = 0.0;
        set_default_exec(Exec::serial);
        t.serial = timed([&] {
            const ExtensionWorkspace ws(ds, es, rule);
            cs = interpolation_constant(ws, 32, 5);
        });
        set_default_exec(Exec::parallel);
        t.parallel = timed([&] {
            const ExtensionWorkspace ws(ds, es, rule);
            cp = interpolation_constant(ws, 32, 5);
        });
        t.identical = cs == cp;
        row("extension trials (32)", t);
    }

    // 5. kernel-estimate scan
    {
        EstimateGrid grid = EstimateGrid::smoothness_defaults();
        grid.refine = 3;
        Timing t;
        double fs = 0.0, fp = 0.0;
        set_default_exec(Exec::serial);
        t.serial = timed([&] { fs = fit_smoothness_estimate(2, 2.0, grid).constant; });
        set_default_exec(Exec::parallel);
        t.parallel = timed([&] { fp = fit_smoothness_estimate(2, 2.0, grid).constant; });
        t.identical = fs == fp;
        row("difference-estimate scan", t);
    }

    set_default_exec(Exec::parallel);
    return 0;
}
