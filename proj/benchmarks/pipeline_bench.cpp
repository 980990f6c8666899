#include <benchmark/benchmark.h>

#include <sstream>

#include "laptel/channels.hpp"
#include "laptel/config.hpp"
#include "laptel/gg.hpp"
#include "laptel/ingest.hpp"
#include "laptel/kpi.hpp"
#include "laptel/synth.hpp"

namespace {

using namespace laptel;

struct Fixture {
    Lap lap;
    ReferenceLine planned;
    EngineConfig cfg;

    Fixture() {
        const TrackSpec track = oval_track();
        const ReferenceLine ref = build_reference(track, 0.25);
        DriverProfile profile;
        profile.coast_gap_s = 2.0;
        SimResult sim = simulate_lap(ref, profile, cfg.vehicle, cfg.rate_hz);
        lap = std::move(sim.lap);
        planned = std::move(sim.planned);
    }
};

const Fixture& fixture() {
    static Fixture fx;
    return fx;
}

void ComputeChannels(benchmark::State& state) {
    const Fixture& fx = fixture();
    for (auto _ : state) {
        MathChannels ch = compute_all(fx.lap, fx.cfg.vehicle, fx.cfg.channels);
        benchmark::DoNotOptimize(ch);
    }
    state.SetItemsProcessed(state.iterations() * fx.lap.size());
}
BENCHMARK(ComputeChannels);

void FullReport(benchmark::State& state) {
    const Fixture& fx = fixture();
    for (auto _ : state) {
        MathChannels ch = compute_all(fx.lap, fx.cfg.vehicle, fx.cfg.channels);
        Segmentation seg = segment_lap(fx.lap, ch, fx.cfg.segment);
        KpiReport report = compute_report(fx.lap, ch, seg, &fx.planned, fx.cfg.kpi);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(FullReport);

void PolylineProjection(benchmark::State& state) {
    const Fixture& fx = fixture();
    for (auto _ : state) {
        double dev = lateral_deviation(fx.lap, fx.planned);
        benchmark::DoNotOptimize(dev);
    }
    state.SetItemsProcessed(state.iterations() * fx.lap.size());
}
BENCHMARK(PolylineProjection);

void Resample(benchmark::State& state) {
    const Fixture& fx = fixture();
    std::istringstream csv(telemetry_csv(fx.lap.samples));
    RawSeries raw = parse_csv(csv);
    for (auto _ : state) {
        auto samples = resample(raw, 100.0);
        benchmark::DoNotOptimize(samples);
    }
    state.SetItemsProcessed(state.iterations() * raw.t.size());
}
BENCHMARK(Resample);

void Envelope(benchmark::State& state) {
    const Fixture& fx = fixture();
    const auto points = gg_points(fx.lap);
    for (auto _ : state) {
        GgEnvelope env = gg_envelope(points, 72);
        benchmark::DoNotOptimize(env);
    }
    state.SetItemsProcessed(state.iterations() * points.size());
}
BENCHMARK(Envelope);

}  // namespace

BENCHMARK_MAIN();
