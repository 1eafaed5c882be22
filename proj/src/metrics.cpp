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

#include "cuefuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "cuefuse/error.hpp"
#include "cuefuse/simd.hpp"
#include "cuefuse/text.hpp"

namespace cuefuse {

double harmonic_mean(double p, double r) noexcept { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

namespace {

std::map<std::string, std::size_t> ngram_counts(const Tokens& tokens, std::size_t n) {
    std::map<std::string, std::size_t> counts;
    if (n == 0 || tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (std::size_t j = 1; j < n; ++j) {
            key.push_back('\x1f');
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

std::size_t clipped_overlap(const std::map<std::string, std::size_t>& cand, const std::map<std::string, std::size_t>& ref) {
    std::size_t total = 0;
    for (const auto& [gram, c] : cand)
        if (const auto it = ref.find(gram); it != ref.end()) total += std::min(c, it->second);
    return total;
}

PRF make_prf(double precision, double recall) { return PRF{precision, recall, harmonic_mean(precision, recall)}; }

} // namespace

PRF rouge_n(const Tokens& candidate, const Tokens& reference, std::size_t n) {
    if (n < 1) throw Error(Errc::InvalidArgument, "ROUGE-N needs n >= 1");
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    const double overlap = static_cast<double>(clipped_overlap(cand, ref));
    const double cand_total = candidate.size() >= n ? static_cast<double>(candidate.size() - n + 1) : 0.0;
    const double ref_total = reference.size() >= n ? static_cast<double>(reference.size() - n + 1) : 0.0;
    return make_prf(cand_total > 0.0 ? overlap / cand_total : 0.0, ref_total > 0.0 ? overlap / ref_total : 0.0);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

PRF rouge_l(const Tokens& candidate, const Tokens& reference) {
    if (candidate.empty() || reference.empty()) return PRF{};
    const double lcs = static_cast<double>(lcs_length(candidate, reference));
    return make_prf(lcs / static_cast<double>(candidate.size()), lcs / static_cast<double>(reference.size()));
}

double bleu(const Tokens& candidate, const Tokens& reference, std::size_t max_n) {
    if (max_n < 1) throw Error(Errc::InvalidArgument, "BLEU needs max_n >= 1");
    if (candidate.empty() || reference.empty()) return 0.0;
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto cand = ngram_counts(candidate, n);
        const auto ref = ngram_counts(reference, n);
        const double matches = static_cast<double>(clipped_overlap(cand, ref));
        const double total = candidate.size() >= n ? static_cast<double>(candidate.size() - n + 1) : 0.0;
        double p;
        if (matches > 0.0) {
            p = matches / total;
        } else if (n == 1) {
            return 0.0;
        } else {
            p = 1.0 / (total + 1.0);
        }
        log_sum += std::log(p);
    }
    const double c = static_cast<double>(candidate.size());
    const double r = static_cast<double>(reference.size());
    const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
    return bp * std::exp(log_sum / static_cast<double>(max_n));
}

PRF bertscore(const TokenEmbeddings& candidate, const TokenEmbeddings& reference) {
    if (candidate.empty() || reference.empty()) throw Error(Errc::EmptyInput, "BERTScore needs tokens on both sides");
    if (candidate.dim != reference.dim)
        throw Error(Errc::DimensionMismatch, "embedding dims " + std::to_string(candidate.dim) + " vs " +
                                                 std::to_string(reference.dim));
    const auto norms = [](const TokenEmbeddings& e) {
        std::vector<double> out;
        out.reserve(e.vectors.size());
        for (const auto& v : e.vectors) {
            if (v.size() != e.dim) throw Error(Errc::DimensionMismatch, "vector length differs from dim");
            out.push_back(std::sqrt(simd::sum_squares(v)));
        }
        return out;
    };
    const auto cn = norms(candidate);
    const auto rn = norms(reference);
    std::vector<double> best_c(cn.size(), -1.0), best_r(rn.size(), -1.0);
    for (std::size_t i = 0; i < cn.size(); ++i)
        for (std::size_t j = 0; j < rn.size(); ++j) {
            const double cos = cn[i] > 0.0 && rn[j] > 0.0
                                   ? simd::dot(candidate.vectors[i], reference.vectors[j]) / (cn[i] * rn[j])
                                   : 0.0;
            best_c[i] = std::max(best_c[i], cos);
            best_r[j] = std::max(best_r[j], cos);
        }
    const double p = std::accumulate(best_c.begin(), best_c.end(), 0.0) / static_cast<double>(best_c.size());
    const double r = std::accumulate(best_r.begin(), best_r.end(), 0.0) / static_cast<double>(best_r.size());
    // Negative cosines leave F1 at 0 rather than producing a signed harmonic mean.
    const double pc = std::clamp(p, 0.0, 1.0);
    const double rc = std::clamp(r, 0.0, 1.0);
    return PRF{pc, rc, harmonic_mean(pc, rc)};
}

double length_ratio(std::size_t summary_tokens, std::size_t source_tokens) {
    if (source_tokens == 0) throw Error(Errc::EmptySource, "source transcript has no tokens");
    return static_cast<double>(summary_tokens) / static_cast<double>(source_tokens);
}

double jaccard(const Tokens& a, const Tokens& b) {
    const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& t : sa) inter += sb.count(t);
    return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

double iou(const TimeInterval& a, const TimeInterval& b) noexcept {
    const double inter = overlap(a, b);
    const double uni = std::max(a.end(), b.end()) - std::min(a.start(), b.start());
    if (uni <= 0.0) return a == b ? 1.0 : 0.0;
    // Disjoint intervals have a gap inside the hull; the union is the summed lengths.
    const double union_len = inter > 0.0 ? uni : a.length() + b.length();
    if (union_len <= 0.0) return a == b ? 1.0 : 0.0;
    return inter / union_len;
}

std::vector<SegmentMatch> match_segments(const std::vector<TimeInterval>& candidate,
                                         const std::vector<TimeInterval>& reference, double iou_threshold) {
    std::vector<SegmentMatch> pairs;
    for (std::size_t i = 0; i < candidate.size(); ++i)
        for (std::size_t j = 0; j < reference.size(); ++j) {
            const double v = iou(candidate[i], reference[j]);
            if (v > iou_threshold) pairs.push_back({i, j, v});
        }
    std::stable_sort(pairs.begin(), pairs.end(), [](const SegmentMatch& a, const SegmentMatch& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.candidate != b.candidate) return a.candidate < b.candidate;
        return a.reference < b.reference;
    });
    std::vector<bool> used_c(candidate.size(), false), used_r(reference.size(), false);
    std::vector<SegmentMatch> out;
    for (const auto& p : pairs) {
        if (used_c[p.candidate] || used_r[p.reference]) continue;
        used_c[p.candidate] = used_r[p.reference] = true;
        out.push_back(p);
    }
    return out;
}

PRF temporal_f1(const std::vector<TimeInterval>& candidate, const std::vector<TimeInterval>& reference,
                double iou_threshold) {
    const double tp = static_cast<double>(match_segments(candidate, reference, iou_threshold).size());
    return make_prf(candidate.empty() ? 0.0 : tp / static_cast<double>(candidate.size()),
                    reference.empty() ? 0.0 : tp / static_cast<double>(reference.size()));
}

namespace {

std::vector<bool> rasterize(const std::vector<TimeInterval>& segments, std::size_t cells, double fps) {
    std::vector<bool> on(cells, false);
    for (const auto& s : segments) {
        for (std::size_t k = 0; k < cells; ++k) {
            const double lo = static_cast<double>(k) / fps;
            const double hi = static_cast<double>(k + 1) / fps;
            if (s.length() == 0.0 ? (lo <= s.start() && s.start() < hi) : std::max(s.start(), lo) < std::min(s.end(), hi))
                on[k] = true;
        }
    }
    return on;
}

} // namespace

PRF frame_prf(const std::vector<TimeInterval>& candidate, const std::vector<TimeInterval>& reference, double duration,
              double sample_fps) {
    if (!(sample_fps > 0.0)) throw Error(Errc::InvalidArgument, "sample fps must be positive");
    const auto cells = static_cast<std::size_t>(std::max(0.0, std::ceil(duration * sample_fps - 1e-9)));
    const auto c = rasterize(candidate, cells, sample_fps);
    const auto r = rasterize(reference, cells, sample_fps);
    std::size_t nc = 0, nr = 0, both = 0;
    for (std::size_t k = 0; k < cells; ++k) {
        nc += c[k];
        nr += r[k];
        both += c[k] && r[k];
    }
    return make_prf(nc ? static_cast<double>(both) / static_cast<double>(nc) : 0.0,
                    nr ? static_cast<double>(both) / static_cast<double>(nr) : 0.0);
}

namespace {

void check_pair(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error(Errc::LengthMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " values");
    if (a.size() < 2) throw Error(Errc::TooShort, "rank correlation needs at least two values");
}

// Number of tied pairs: sum of t(t-1)/2 over runs of equal adjacent keys.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq&& equal) {
    std::uint64_t total = 0, run = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (equal(i - 1, i)) {
            ++run;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    return total + run * (run - 1) / 2;
}

// Bottom-up merge sort counting inversions (strictly greater before smaller).
std::uint64_t count_swaps(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> buf(n);
    std::uint64_t swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n);
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    swaps += mid - i;
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
        }
        std::swap(v, buf);
    }
    return swaps;
}

} // namespace

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    check_pair(a, b);
    const std::size_t n = a.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return a[x] != a[y] ? a[x] < a[y] : b[x] < b[y];
    });
    const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::uint64_t ties_a = tied_pairs(n, [&](std::size_t i, std::size_t j) { return a[idx[i]] == a[idx[j]]; });
    const std::uint64_t ties_ab = tied_pairs(n, [&](std::size_t i, std::size_t j) {
        return a[idx[i]] == a[idx[j]] && b[idx[i]] == b[idx[j]];
    });
    std::vector<double> bs(n);
    for (std::size_t i = 0; i < n; ++i) bs[i] = b[idx[i]];
    const std::uint64_t swaps = count_swaps(bs);
    const std::uint64_t ties_b = tied_pairs(n, [&](std::size_t i, std::size_t j) { return bs[i] == bs[j]; });

    // concordant - discordant = n0 - ties_a - ties_b + ties_ab - 2*swaps
    const auto num = static_cast<std::int64_t>(n0 - ties_a - ties_b + ties_ab) - 2 * static_cast<std::int64_t>(swaps);
    const std::uint64_t da = n0 - ties_a, db = n0 - ties_b;
    if (da == 0 || db == 0) throw Error(Errc::ConstantInput, "Kendall tau is undefined for a constant ranking");
    return static_cast<double>(num) / std::sqrt(static_cast<double>(da) * static_cast<double>(db));
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    check_pair(a, b);
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double mean = (static_cast<double>(a.size()) + 1.0) / 2.0; // mean of ranks 1..n, ties included
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (ra[i] - mean) * (rb[i] - mean);
        saa += (ra[i] - mean) * (ra[i] - mean);
        sbb += (rb[i] - mean) * (rb[i] - mean);
    }
    if (saa == 0.0 || sbb == 0.0) throw Error(Errc::ConstantInput, "Spearman rho is undefined for constant input");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CandidateSummary candidate_from(const Summary& summary) {
    CandidateSummary c;
    c.video_id = summary.video_id;
    for (const auto& s : summary.selected) {
        c.intervals.push_back(s.interval);
        c.sentences.push_back(s.text());
    }
    return c;
}

namespace {

// Transcript sentence a summary sentence came from: same tokens and the best
// overlap, falling back to IoU >= 0.5 when the wording drifted.
std::optional<std::size_t> locate_sentence(const Transcript& t, const TimeInterval& interval, const std::string& text) {
    const auto tokens = tokenize(text);
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (const auto& s : t.sentences) {
        if (s.tokens() != tokens) continue;
        const double v = iou(s.interval, interval);
        if (v > best_iou) {
            best_iou = v;
            best = s.index;
        }
    }
    if (best) return best;
    for (const auto& s : t.sentences) {
        const double v = iou(s.interval, interval);
        if (v >= 0.5 && v > best_iou) {
            best_iou = v;
            best = s.index;
        }
    }
    return best;
}

std::optional<TokenEmbeddings> slice_embeddings(const Transcript& t, const TokenEmbeddings& all,
                                                const std::vector<TimeInterval>& intervals,
                                                const std::vector<std::string>& texts) {
    std::vector<std::size_t> offsets;
    std::size_t pos = 0;
    for (const auto& s : t.sentences) {
        offsets.push_back(pos);
        pos += s.tokens().size();
    }
    TokenEmbeddings out;
    out.dim = all.dim;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto idx = locate_sentence(t, intervals[i], texts[i]);
        if (!idx) return std::nullopt;
        const std::size_t count = t.sentences[*idx].tokens().size();
        for (std::size_t k = 0; k < count; ++k) {
            out.tokens.push_back(all.tokens[offsets[*idx] + k]);
            out.vectors.push_back(all.vectors[offsets[*idx] + k]);
        }
    }
    return out;
}

} // namespace

MetricsReport evaluate_pair(const CandidateSummary& candidate, const PgtSummary& reference, const EvaluationInputs& in) {
    if (!in.transcript) throw Error(Errc::InvalidArgument, "evaluation needs the source transcript");
    const Transcript& t = *in.transcript;

    std::vector<TimeInterval> ref_intervals;
    std::vector<std::string> ref_texts;
    for (const auto& e : reference.entries) {
        ref_intervals.push_back(e.interval);
        ref_texts.push_back(e.sentence);
    }
    const Tokens cand_tokens = tokenize(join(candidate.sentences, " "));
    const Tokens ref_tokens = tokenize(join(ref_texts, " "));

    MetricsReport report;
    report.video_id = candidate.video_id.empty() ? t.video_id : candidate.video_id;
    report.method = in.method;
    report.text.rouge1 = rouge_n(cand_tokens, ref_tokens, 1).f1;
    report.text.rouge2 = rouge_n(cand_tokens, ref_tokens, 2).f1;
    report.text.rougeL = rouge_l(cand_tokens, ref_tokens).f1;
    report.text.bleu = bleu(cand_tokens, ref_tokens);
    report.text.length_ratio = length_ratio(cand_tokens.size(), t.token_count());

    if (in.transcript_embeddings) {
        const auto& all = *in.transcript_embeddings;
        if (all.tokens.size() != t.token_count())
            throw Error(Errc::DimensionMismatch, "embeddings cover " + std::to_string(all.tokens.size()) +
                                                     " tokens, transcript has " + std::to_string(t.token_count()));
        const auto ce = slice_embeddings(t, all, candidate.intervals, candidate.sentences);
        const auto re = slice_embeddings(t, all, ref_intervals, ref_texts);
        if (ce && re) {
            if (ce->empty() || re->empty())
                report.text.bertscore_f1 = ce->empty() && re->empty() ? 1.0 : 0.0;
            else
                report.text.bertscore_f1 = bertscore(*ce, *re).f1;
        }
    }

    const auto matches = match_segments(candidate.intervals, ref_intervals, in.iou_threshold);
    const PRF seg = temporal_f1(candidate.intervals, ref_intervals, in.iou_threshold);
    const PRF frames = frame_prf(candidate.intervals, ref_intervals, in.meta.duration, in.sample_fps);
    auto& tm = report.temporal;
    tm.f1 = seg.f1;
    tm.segment_precision = seg.precision;
    tm.segment_recall = seg.recall;
    tm.precision = frames.precision;
    tm.recall = frames.recall;
    tm.frame_f1 = frames.f1;
    tm.matched = matches.size();
    if (matches.size() >= 2) {
        auto ordered = matches;
        std::sort(ordered.begin(), ordered.end(),
                  [](const SegmentMatch& x, const SegmentMatch& y) { return x.candidate < y.candidate; });
        std::vector<double> cand_rank, ref_rank;
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            cand_rank.push_back(static_cast<double>(i));
            ref_rank.push_back(static_cast<double>(ordered[i].reference));
        }
        tm.kendall_tau = kendall_tau(cand_rank, ref_rank);
        tm.spearman_rho = spearman_rho(cand_rank, ref_rank);
    }
    return report;
}

MetricsReport mean_report(const std::vector<MetricsReport>& reports) {
    MetricsReport m;
    m.video_id = "mean";
    if (reports.empty()) return m;
    m.method = reports.front().method;
    const double n = static_cast<double>(reports.size());
    double bert_sum = 0.0;
    std::size_t bert_n = 0;
    for (const auto& r : reports) {
        m.text.rouge1 += r.text.rouge1;
        m.text.rouge2 += r.text.rouge2;
        m.text.rougeL += r.text.rougeL;
        m.text.bleu += r.text.bleu;
        m.text.length_ratio += r.text.length_ratio;
        if (r.text.bertscore_f1) {
            bert_sum += *r.text.bertscore_f1;
            ++bert_n;
        }
        m.temporal.f1 += r.temporal.f1;
        m.temporal.precision += r.temporal.precision;
        m.temporal.recall += r.temporal.recall;
        m.temporal.kendall_tau += r.temporal.kendall_tau;
        m.temporal.spearman_rho += r.temporal.spearman_rho;
        m.temporal.segment_precision += r.temporal.segment_precision;
        m.temporal.segment_recall += r.temporal.segment_recall;
        m.temporal.frame_f1 += r.temporal.frame_f1;
        m.temporal.matched += r.temporal.matched;
    }
    m.text.rouge1 /= n;
    m.text.rouge2 /= n;
    m.text.rougeL /= n;
    m.text.bleu /= n;
    m.text.length_ratio /= n;
    if (bert_n) m.text.bertscore_f1 = bert_sum / static_cast<double>(bert_n);
    m.temporal.f1 /= n;
    m.temporal.precision /= n;
    m.temporal.recall /= n;
    m.temporal.kendall_tau /= n;
    m.temporal.spearman_rho /= n;
    m.temporal.segment_precision /= n;
    m.temporal.segment_recall /= n;
    m.temporal.frame_f1 /= n;
    return m;
}

} // namespace cuefuse
