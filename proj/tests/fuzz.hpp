// Mutation fuzzing of the text parsers.
#pragma once

#include "support.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

/// Applies 1-4 random edits: byte changes, deletions, duplications,
/// truncation and insertion of numeric-looking tokens.
inline std::string mutate(const std::string& seed_text, std::mt19937_64& rng) {
    static const std::vector<std::string> tokens{"D+99", "E-400", "-", ".", "  ", "\n", "\r\n", "9999999999999",
                                                 "nan", "1e308", "0", "G", "R", ">", "END OF HEADER"};
    std::string s = seed_text;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits && !s.empty(); ++e) {
        const std::size_t pos = rng() % s.size();
        switch (rng() % 7) {
        case 0: s[pos] = static_cast<char>(rng() % 256); break;
        case 1: s[pos] = "0123456789 .-+DE"[rng() % 16]; break;
        case 2: s.erase(pos, 1 + rng() % 40); break;
        case 3: s.insert(pos, tokens[rng() % tokens.size()]); break;
        case 4: s.resize(pos); break;
        case 5: {
            const std::size_t len = std::min<std::size_t>(1 + rng() % 160, s.size() - pos);
            s.insert(rng() % s.size(), s.substr(pos, len));
            break;
        }
        default: {
            const std::size_t a = s.find('\n', pos);
            if (a != std::string::npos) {
                s.erase(a, 1);
            }
        }
        }
    }
    return s;
}

struct FuzzReport {
    std::size_t cases = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<std::string> crashes; ///< exceptions outside the library hierarchy
};

/// Runs `n` mutated inputs, cycling through `corpus`, through `parse`.
/// Library errors count as clean rejections; anything else is a crash.
inline FuzzReport fuzz(const std::vector<std::string>& corpus, std::size_t n, std::uint64_t seed,
                       const std::function<void(const std::string&)>& parse) {
    FuzzReport r;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string input = mutate(corpus[i % corpus.size()], rng);
        ++r.cases;
        try {
            parse(input);
            ++r.accepted;
        } catch (const hapsgnss::Error&) {
            ++r.rejected;
        } catch (const std::exception& e) {
            r.crashes.push_back(e.what());
        }
    }
    return r;
}

/// Parses navigation text and evaluates every record it yields.
inline void parse_and_use_navigation(const std::string& text) {
    const auto nav = hapsgnss::parse_navigation(text);
    for (const auto& e : nav.ephemerides) {
        try {
            (void)hapsgnss::satellite_state(e, e.toe + 10.0);
        } catch (const hapsgnss::Error&) {
        }
    }
}

inline std::vector<std::string> navigation_corpus() {
    return {read_text(data_dir() / "golden_v2.nav"), read_text(data_dir() / "golden_v3.rnx"),
            read_text(data_dir() / "bad_eccentricity.nav")};
}

inline std::vector<std::string> observation_corpus() {
    return {read_text(data_dir() / "golden_v2.obs"), read_text(data_dir() / "golden_v3.obs"),
            read_text(data_dir() / "blank_and_truncated_v3.obs")};
}

} // namespace testsupport
