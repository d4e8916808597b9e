// Copyright the moc-toolkit contributors
// SPDX-License-Identifier: Apache-2.0

#include "moc/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "moc/errors.hpp"
#include "moc/rng.hpp"

namespace moc::extraction {

namespace {

bool timeline_order(const Timeline& a, const Timeline& b) {
    if (a.user_id != b.user_id) return a.user_id < b.user_id;
    if (a.anchor != b.anchor) return a.anchor < b.anchor;
    return a.timeline_id < b.timeline_id;
}

std::map<std::string, std::vector<const Post*>> group_by_user(const std::vector<Post>& posts) {
    std::map<std::string, std::vector<const Post*>> by_user;
    for (const Post& p : posts) by_user[p.user_id].push_back(&p);
    for (auto& [user, list] : by_user) {
        std::sort(list.begin(), list.end(), [](const Post* a, const Post* b) {
            if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
            return a->post_id < b->post_id;
        });
    }
    return by_user;
}

}  // namespace

std::vector<changepoint::CountSeries> daily_counts(const std::vector<Post>& posts) {
    std::vector<changepoint::CountSeries> out;
    for (const auto& [user, list] : group_by_user(posts)) {
        const Date first = list.front()->timestamp.date();
        const Date last = list.back()->timestamp.date();
        changepoint::CountSeries series;
        series.user_id = user;
        series.start_date = first;
        series.counts.assign(static_cast<std::size_t>(last - first) + 1, 0);
        for (const Post* p : list) {
            ++series.counts[static_cast<std::size_t>(p->timestamp.date() - first)];
        }
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<Timeline> extract_timelines(const std::vector<Post>& posts,
                                        const std::vector<UserChangePoints>& changepoints,
                                        const ExtractionParams& params,
                                        ExtractionSummary* summary) {
    const auto by_user = group_by_user(posts);
    ExtractionSummary local;
    std::vector<Timeline> out;

    for (const UserChangePoints& ucp : changepoints) {
        auto it = by_user.find(ucp.user_id);
        for (const changepoint::ChangePoint& cp : ucp.changepoints) {
            ++local.candidates;
            Timeline t;
            t.user_id = ucp.user_id;
            t.anchor = cp.date;
            t.timeline_id = ucp.user_id + "/" + cp.date.to_string();
            if (it != by_user.end()) {
                for (const Post* p : it->second) {
                    const std::int64_t delta = p->timestamp.date() - cp.date;
                    if (delta >= -params.window_days && delta <= params.window_days) {
                        t.posts.push_back(*p);
                    }
                }
            }
            if (t.posts.size() < params.min_posts) {
                ++local.dropped_short;
            } else if (t.posts.size() > params.max_posts) {
                ++local.dropped_long;
            } else {
                ++local.kept;
                out.push_back(std::move(t));
            }
        }
    }
    std::sort(out.begin(), out.end(), timeline_order);
    if (summary) {
        local.sampled = summary->sampled;
        *summary = local;
    }
    return out;
}

std::vector<Timeline> sample_timelines(const std::vector<Timeline>& candidates, std::size_t n,
                                       bool one_per_user, std::uint64_t seed) {
    if (n == 0) return {};
    std::vector<const Timeline*> sorted;
    sorted.reserve(candidates.size());
    for (const Timeline& t : candidates) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(),
              [](const Timeline* a, const Timeline* b) { return timeline_order(*a, *b); });

    Rng rng(seed);
    std::vector<const Timeline*> picked;
    if (one_per_user) {
        std::map<std::string, std::vector<const Timeline*>> by_user;
        for (const Timeline* t : sorted) by_user[t->user_id].push_back(t);
        if (by_user.size() < n) {
            throw InsufficientCandidates("requested " + std::to_string(n) +
                                         " users but only " + std::to_string(by_user.size()) +
                                         " have candidate timelines");
        }
        std::vector<std::string> users;
        users.reserve(by_user.size());
        for (const auto& [user, list] : by_user) users.push_back(user);
        rng.shuffle(users);
        users.resize(n);
        for (const std::string& user : users) {
            const auto& list = by_user.at(user);
            Rng pick = rng.derive(user);
            picked.push_back(list[pick.below(list.size())]);
        }
    } else {
        if (sorted.size() < n) {
            throw InsufficientCandidates("requested " + std::to_string(n) +
                                         " timelines but only " + std::to_string(sorted.size()) +
                                         " candidates exist");
        }
        rng.shuffle(sorted);
        picked.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n));
    }

    std::sort(picked.begin(), picked.end(),
              [](const Timeline* a, const Timeline* b) { return timeline_order(*a, *b); });
    std::vector<Timeline> out;
    out.reserve(picked.size());
    for (const Timeline* t : picked) out.push_back(*t);
    return out;
}

LengthStats length_stats(const std::vector<Timeline>& timelines) {
    LengthStats s;
    if (timelines.empty()) return s;
    s.count = timelines.size();
    s.min = timelines.front().size();
    for (const Timeline& t : timelines) {
        s.total_posts += t.size();
        s.min = std::min(s.min, t.size());
        s.max = std::max(s.max, t.size());
    }
    s.mean = static_cast<double>(s.total_posts) / static_cast<double>(s.count);
    double ss = 0.0;
    for (const Timeline& t : timelines) {
        const double d = static_cast<double>(t.size()) - s.mean;
        ss += d * d;
    }
    s.stddev = std::sqrt(ss / static_cast<double>(s.count));
    return s;
}

}  // namespace moc::extraction
