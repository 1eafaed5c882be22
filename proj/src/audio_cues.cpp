/*
 * Copyright 2026 The cuefuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cuefuse/audio_cues.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "cuefuse/error.hpp"
#include "cuefuse/simd.hpp"

namespace cuefuse {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t to_samples(double seconds, int sample_rate) {
    return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    return w;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

CueKind cue_kind_of(FeatureKind kind) noexcept {
    switch (kind) {
    case FeatureKind::Pitch: return CueKind::Pitch;
    case FeatureKind::Loudness: return CueKind::Loudness;
    case FeatureKind::Tonality: return CueKind::Tonality;
    }
    return CueKind::Loudness;
}

const char* to_string(FeatureKind kind) noexcept { return to_string(cue_kind_of(kind)); }

std::vector<double> ZScoreSeries::invert() const {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] * sigma + mu;
    return out;
}

void AnalysisFrames::push(const double* samples, std::size_t count, double center_time) {
    const std::size_t offset = data_.size();
    data_.resize(offset + frame_length_, 0.0);
    std::copy(samples, samples + std::min(count, frame_length_), data_.begin() + static_cast<std::ptrdiff_t>(offset));
    times_.push_back(center_time);
}

AnalysisFrames frame_signal(const AudioBuffer& audio, double win, double hop) {
    if (!(hop > 0.0) || win < hop)
        throw Error(Errc::InvalidArgument, "need win >= hop > 0");
    if (audio.sample_rate <= 0) throw Error(Errc::InvalidArgument, "sample rate must be positive");
    const std::size_t win_n = to_samples(win, audio.sample_rate);
    const std::size_t hop_n = std::max<std::size_t>(1, to_samples(hop, audio.sample_rate));
    if (win_n < 2) throw Error(Errc::InvalidArgument, "analysis window shorter than two samples");
    const std::size_t len = audio.samples.size();
    if (len < win_n)
        throw Error(Errc::AudioTooShort, std::to_string(len) + " samples, window needs " + std::to_string(win_n));

    AnalysisFrames frames(win_n, static_cast<double>(hop_n) / audio.sample_rate, audio.sample_rate);
    const std::size_t count = (len + hop_n - 1) / hop_n;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t start = i * hop_n;
        const double center = (static_cast<double>(start) + static_cast<double>(win_n) / 2.0) / audio.sample_rate;
        frames.push(audio.samples.data() + start, len - start, center);
    }
    return frames;
}

FeatureSeries rms_energy(const AnalysisFrames& frames) {
    FeatureSeries s;
    s.kind = FeatureKind::Loudness;
    s.hop = frames.hop();
    s.frame_times = frames.times();
    s.values.resize(frames.size());
    const auto& k = simd::active();
    const double n = static_cast<double>(frames.frame_length());
    for (std::size_t i = 0; i < frames.size(); ++i)
        s.values[i] = std::sqrt(k.sum_squares(frames.frame(i), frames.frame_length()) / n);
    return s;
}

FeatureSeries estimate_pitch(const AnalysisFrames& frames, int sample_rate, const PitchOptions& opts) {
    if (!(opts.f_min > 0.0) || opts.f_max <= opts.f_min)
        throw Error(Errc::InvalidArgument, "need 0 < f_min < f_max");
    const std::size_t n = frames.frame_length();
    const auto lag_min = static_cast<std::size_t>(std::floor(sample_rate / opts.f_max));
    const auto lag_max = static_cast<std::size_t>(std::ceil(sample_rate / opts.f_min));
    if (lag_min < 2 || lag_max + 2 >= n)
        throw Error(Errc::InvalidArgument, "pitch lag range " + std::to_string(lag_min) + ".." +
                                               std::to_string(lag_max) + " does not fit a " +
                                               std::to_string(n) + "-sample frame");

    FeatureSeries s;
    s.kind = FeatureKind::Pitch;
    s.hop = frames.hop();
    s.frame_times = frames.times();
    s.values.assign(frames.size(), kNaN);

    const auto& k = simd::active();
    std::vector<double> x(n);
    std::vector<double> prefix(n + 1);
    std::vector<double> r(lag_max + 2, 0.0);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const double* raw = frames.frame(f);
        const double mean = k.sum(raw, n) / static_cast<double>(n);
        k.subtract_scalar(raw, mean, x.data(), n);
        const double energy = k.sum_squares(x.data(), n);
        if (std::sqrt(energy / static_cast<double>(n)) < opts.silence_rms) continue;

        prefix[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];

        double best = -1.0;
        for (std::size_t lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
            const std::size_t m = n - lag;
            const double head = prefix[m];
            const double tail = prefix[n] - prefix[lag];
            const double denom = std::sqrt(head * tail);
            r[lag] = denom > 0.0 ? k.dot(x.data(), x.data() + lag, m) / denom : 0.0;
            if (lag >= lag_min && lag <= lag_max) best = std::max(best, r[lag]);
        }
        if (best < opts.voicing_threshold) continue;

        // First local maximum close to the global one; guards against picking
        // a period multiple (octave-down error).
        const double accept = std::max(opts.voicing_threshold, 0.9 * best);
        std::size_t pick = 0;
        for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
            if (r[lag] >= accept && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1]) {
                pick = lag;
                break;
            }
        }
        if (pick == 0) continue;

        const double a = r[pick - 1], b = r[pick], c = r[pick + 1];
        const double curvature = a - 2.0 * b + c;
        double offset = 0.0;
        if (curvature < 0.0) offset = std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
        s.values[f] = sample_rate / (static_cast<double>(pick) + offset);
    }
    return s;
}

FeatureSeries interpolate_contour(const FeatureSeries& series) {
    FeatureSeries out = series;
    auto& v = out.values;
    std::size_t first = v.size();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isnan(v[i])) {
            first = i;
            break;
        }
    if (first == v.size()) throw Error(Errc::AllUndefined, "every frame of the contour is undefined");

    for (std::size_t i = 0; i < first; ++i) v[i] = v[first];
    std::size_t prev = first;
    for (std::size_t i = first + 1; i < v.size(); ++i) {
        if (std::isnan(v[i])) continue;
        if (i > prev + 1) {
            const double span = static_cast<double>(i - prev);
            for (std::size_t j = prev + 1; j < i; ++j) {
                const double frac = static_cast<double>(j - prev) / span;
                v[j] = v[prev] + frac * (v[i] - v[prev]);
            }
        }
        prev = i;
    }
    for (std::size_t i = prev + 1; i < v.size(); ++i) v[i] = v[prev];
    return out;
}

FeatureSeries hammarberg_index(const AnalysisFrames& frames, int sample_rate) {
    if (sample_rate < 10000)
        throw Error(Errc::InvalidArgument, "Hammarberg index needs a 5 kHz band (sample rate >= 10 kHz)");
    const std::size_t n = frames.frame_length();
    const std::size_t nfft = next_pow2(n);
    const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(nfft);
    const auto top_bin = static_cast<std::size_t>(std::floor(5000.0 / bin_hz));
    const auto split_bin = static_cast<std::size_t>(std::floor(2000.0 / bin_hz));

    // Rows of the zero-padded DFT basis up to 5 kHz; each bin is two dot products.
    std::vector<double> cos_rows((top_bin + 1) * n);
    std::vector<double> sin_rows((top_bin + 1) * n);
    for (std::size_t b = 0; b <= top_bin; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(b * i % nfft) / static_cast<double>(nfft);
            cos_rows[b * n + i] = std::cos(phase);
            sin_rows[b * n + i] = std::sin(phase);
        }
    }
    const std::vector<double> window = hann(n);

    FeatureSeries s;
    s.kind = FeatureKind::Tonality;
    s.hop = frames.hop();
    s.frame_times = frames.times();
    s.values.resize(frames.size());

    const auto& k = simd::active();
    std::vector<double> centered(n), x(n);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const double* raw = frames.frame(f);
        const double mean = k.sum(raw, n) / static_cast<double>(n);
        k.subtract_scalar(raw, mean, centered.data(), n);
        k.multiply(centered.data(), window.data(), x.data(), n);
        double low = 0.0, high = 0.0;
        for (std::size_t b = 0; b <= top_bin; ++b) {
            const double re = k.dot(x.data(), cos_rows.data() + b * n, n);
            const double im = k.dot(x.data(), sin_rows.data() + b * n, n);
            const double mag = std::sqrt(re * re + im * im);
            if (b <= split_bin)
                low = std::max(low, mag);
            else
                high = std::max(high, mag);
        }
        s.values[f] = 20.0 * std::log10(std::max(low, 1e-10) / std::max(high, 1e-10));
    }
    return s;
}

ZScoreSeries zscore(const FeatureSeries& series) {
    std::vector<double> defined;
    defined.reserve(series.values.size());
    for (double v : series.values)
        if (!std::isnan(v)) defined.push_back(v);
    if (defined.size() < 2)
        throw Error(Errc::TooFewValues, std::to_string(defined.size()) + " defined values, need 2");

    const auto& k = simd::active();
    const double count = static_cast<double>(defined.size());
    const double mu = k.sum(defined.data(), defined.size()) / count;
    std::vector<double> dev(defined.size());
    k.subtract_scalar(defined.data(), mu, dev.data(), dev.size());
    const double sigma = std::sqrt(k.sum_squares(dev.data(), dev.size()) / count);

    ZScoreSeries z;
    z.kind = series.kind;
    z.frame_times = series.frame_times;
    z.hop = series.hop;
    z.mu = mu;
    z.sigma = sigma;
    z.degenerate_flat = sigma < 1e-12;
    z.z.resize(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double v = series.values[i];
        if (std::isnan(v))
            z.z[i] = kNaN;
        else
            z.z[i] = z.degenerate_flat ? 0.0 : (v - mu) / sigma;
    }
    return z;
}

double AudioThresholds::for_kind(FeatureKind kind) const noexcept {
    const auto& o = per_kind[static_cast<std::size_t>(kind)];
    return o ? *o : shared;
}

std::vector<CueEvent> detect_audio_cues(const std::vector<ZScoreSeries>& series,
                                        const AudioThresholds& thresholds) {
    std::vector<CueEvent> events;
    for (const auto& s : series) {
        const double thr = thresholds.for_kind(s.kind);
        if (!(thr > 0.0)) throw Error(Errc::InvalidArgument, "z threshold must be positive");
        const CueKind kind = cue_kind_of(s.kind);
        std::size_t i = 0;
        while (i < s.z.size()) {
            if (!(s.z[i] > thr)) {
                ++i;
                continue;
            }
            std::size_t j = i;
            double peak = s.z[i];
            while (j + 1 < s.z.size() && s.z[j + 1] > thr) peak = std::max(peak, s.z[++j]);
            const double start = std::max(0.0, s.frame_times[i] - s.hop / 2.0);
            const double end = s.frame_times[j] + s.hop / 2.0;
            events.push_back(make_cue(kind, TimeInterval(start, end), peak));
            i = j + 1;
        }
    }
    std::stable_sort(events.begin(), events.end(), [](const CueEvent& a, const CueEvent& b) {
        if (a.time.start() != b.time.start()) return a.time.start() < b.time.start();
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return events;
}

std::vector<CueEvent> detect_audio_cues(const std::vector<ZScoreSeries>& series, double z_threshold) {
    AudioThresholds t;
    t.shared = z_threshold;
    return detect_audio_cues(series, t);
}

namespace {

AudioAnalysis finish_analysis(FeatureSeries pitch_raw, FeatureSeries loudness, FeatureSeries tonality,
                              const AudioCueConfig& config) {
    AudioAnalysis a;
    a.pitch_raw = std::move(pitch_raw);
    a.loudness = std::move(loudness);
    a.tonality = std::move(tonality);
    try {
        a.pitch = interpolate_contour(a.pitch_raw);
    } catch (const Error& e) {
        if (e.code() != Errc::AllUndefined) throw;
        a.pitch = a.pitch_raw; // nothing voiced: no pitch cues
    }
    for (const FeatureSeries* s : {&a.pitch, &a.loudness, &a.tonality}) {
        try {
            a.z.push_back(zscore(*s));
        } catch (const Error& e) {
            if (e.code() != Errc::TooFewValues) throw;
        }
    }
    a.cues = detect_audio_cues(a.z, config.thresholds);
    return a;
}

} // namespace

AudioAnalysis analyze_audio(const AudioBuffer& audio, const AudioCueConfig& config) {
    const AnalysisFrames frames = frame_signal(audio, config.window, config.hop);
    return finish_analysis(estimate_pitch(frames, audio.sample_rate, config.pitch), rms_energy(frames),
                           hammarberg_index(frames, audio.sample_rate), config);
}

AudioAnalysis analyze_features(const PrecomputedFeatures& features, const AudioCueConfig& config) {
    const auto make = [&](FeatureKind kind, const std::vector<double>& values) {
        FeatureSeries s;
        s.kind = kind;
        s.values = values;
        s.frame_times = features.times;
        s.hop = features.hop;
        return s;
    };
    return finish_analysis(make(FeatureKind::Pitch, features.pitch), make(FeatureKind::Loudness, features.loudness),
                           make(FeatureKind::Tonality, features.tonality), config);
}

std::string series_csv(const FeatureSeries& raw, const ZScoreSeries& z) {
    std::string out = "frame_time,raw,z\n";
    char line[96];
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        const double zi = i < z.z.size() ? z.z[i] : kNaN;
        std::snprintf(line, sizeof line, "%.4f,%.6f,%.6f\n", raw.frame_times[i], raw.values[i], zi);
        out += line;
    }
    return out;
}

} // namespace cuefuse
