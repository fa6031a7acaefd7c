#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "d2dcache/config.hpp"
#include "d2dcache/csv.hpp"

namespace d2dcache {

/// Runs fn(0..n-1) on up to `threads` workers and returns the results in
/// index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn)
{
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    // Lowest index first so the reported error does not depend on scheduling.
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

struct RecipeOutput {
    CsvTable table;
    std::vector<std::string> notes;  // recipe choices and warnings for the manifest
};

/// Evaluates the recipe named by cfg.experiment. Rows follow the sweep order.
RecipeOutput run_recipe(const ExperimentConfig& cfg);

struct RunArtifacts {
    std::string csv_path;
    std::string manifest_path;
    std::size_t rows = 0;
};

/// Runs the recipe and writes `<out_dir>/<cfg.output>` plus a
/// `<stem>.manifest.json` beside it.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Manifest text: resolved parameters, seeds, version. No timestamps, so
/// reruns produce identical bytes.
std::string manifest_json(const ExperimentConfig& cfg, const RecipeOutput& out,
                          const std::string& csv_name);

const char* library_version() noexcept;

}  // namespace d2dcache
