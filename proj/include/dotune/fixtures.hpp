/*
 * fixtures.hpp
 *
 * This source file is part of the dotune project
 *
 * Copyright 2026 the dotune authors
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

#pragma once

#include <string>
#include <vector>

#include "dotune/synthetic.hpp"

namespace dotune {

//! The shared 52-knob universe used by every built-in surface. Names and
//! ranges follow common MySQL/InnoDB server variables; sizes are in the unit
//! suffixed on the name so integer grids stay tractable.
inline KnobCatalog reference_catalog() {
    std::vector<KnobSpec> ks;
    auto integer = [&](const char* name, double lo, double hi, std::int64_t def) {
        KnobSpec k;
        k.name = name;
        k.kind = KnobKind::IntegerRange;
        k.min = lo;
        k.max = hi;
        k.default_value = def;
        ks.push_back(std::move(k));
    };
    auto continuous = [&](const char* name, double lo, double hi, double def) {
        KnobSpec k;
        k.name = name;
        k.kind = KnobKind::ContinuousRange;
        k.min = lo;
        k.max = hi;
        k.default_value = def;
        ks.push_back(std::move(k));
    };
    auto boolean = [&](const char* name, bool def) {
        KnobSpec k;
        k.name = name;
        k.kind = KnobKind::Boolean;
        k.default_value = def;
        ks.push_back(std::move(k));
    };
    auto enumeration = [&](const char* name, std::vector<std::string> choices, std::string def) {
        KnobSpec k;
        k.name = name;
        k.kind = KnobKind::Enumeration;
        k.choices = std::move(choices);
        k.default_value = std::move(def);
        ks.push_back(std::move(k));
    };

    integer("innodb_buffer_pool_size_mb", 128, 16384, 128);
    integer("innodb_log_file_size_mb", 48, 4096, 48);
    integer("innodb_log_buffer_size_mb", 1, 256, 16);
    integer("innodb_io_capacity", 100, 20000, 200);
    integer("innodb_io_capacity_max", 200, 40000, 2000);
    integer("innodb_read_io_threads", 1, 64, 4);
    integer("innodb_write_io_threads", 1, 64, 4);
    integer("innodb_purge_threads", 1, 32, 4);
    integer("innodb_page_cleaners", 1, 16, 4);
    integer("innodb_lru_scan_depth", 100, 8192, 1024);
    integer("innodb_sync_array_size", 1, 64, 1);
    integer("innodb_thread_concurrency", 0, 128, 0);
    integer("innodb_open_files", 100, 8192, 4000);
    integer("innodb_rollback_segments", 1, 128, 128);
    integer("table_open_cache", 256, 16384, 4000);
    integer("table_open_cache_instances", 1, 64, 16);
    integer("thread_cache_size", 0, 512, 9);
    integer("max_connections", 100, 5000, 151);
    integer("back_log", 50, 2000, 151);
    integer("sort_buffer_size_kb", 64, 16384, 256);
    integer("join_buffer_size_kb", 64, 16384, 256);
    integer("read_buffer_size_kb", 32, 8192, 128);
    integer("read_rnd_buffer_size_kb", 64, 16384, 256);
    integer("tmp_table_size_mb", 16, 1024, 16);
    integer("max_heap_table_size_mb", 16, 1024, 16);
    integer("key_buffer_size_mb", 8, 512, 8);
    integer("binlog_cache_size_kb", 32, 4096, 32);
    integer("max_binlog_size_mb", 64, 1024, 1024);
    integer("innodb_autoextend_increment", 1, 256, 64);
    integer("innodb_concurrency_tickets", 100, 20000, 5000);
    integer("innodb_max_dirty_pages_pct_lwm", 0, 99, 10);
    integer("innodb_sync_spin_loops", 0, 100, 30);
    integer("innodb_spin_wait_delay", 0, 60, 6);
    integer("innodb_purge_batch_size", 1, 5000, 300);
    integer("innodb_compression_level", 0, 9, 6);
    integer("innodb_read_ahead_threshold", 0, 64, 56);
    continuous("innodb_max_dirty_pages_pct", 5.0, 99.9, 90.0);
    continuous("innodb_adaptive_flushing_lwm", 0.0, 70.0, 10.0);
    continuous("long_query_time", 0.01, 10.0, 10.0);
    continuous("innodb_segment_reserve_factor", 0.03, 0.4, 0.125);
    continuous("innodb_old_blocks_pct", 5.0, 95.0, 37.0);
    boolean("innodb_adaptive_hash_index", true);
    boolean("innodb_adaptive_flushing", true);
    boolean("innodb_random_read_ahead", false);
    boolean("innodb_stats_persistent", true);
    boolean("skip_name_resolve", false);
    boolean("innodb_doublewrite", true);
    enumeration("innodb_flush_log_at_trx_commit", {"0", "1", "2"}, "1");
    enumeration("innodb_flush_method", {"fsync", "O_DSYNC", "O_DIRECT", "O_DIRECT_NO_FSYNC"},
                "fsync");
    enumeration("innodb_change_buffering", {"none", "inserts", "deletes", "changes", "purges", "all"},
                "all");
    enumeration("binlog_format", {"ROW", "STATEMENT", "MIXED"}, "ROW");
    enumeration("innodb_checksum_algorithm", {"crc32", "innodb", "none"}, "crc32");
    return KnobCatalog(std::move(ks));
}

namespace fixture_detail {

inline EffectSpec monotone(double w) {
    EffectSpec e;
    e.shape = EffectShape::MonotoneSaturating;
    e.weight = w;
    return e;
}

inline EffectSpec unimodal(double w, double peak, double width) {
    EffectSpec e;
    e.shape = EffectShape::UnimodalPeak;
    e.weight = w;
    e.peak = peak;
    e.width = width;
    return e;
}

inline EffectSpec step(double w, double threshold) {
    EffectSpec e;
    e.shape = EffectShape::Step;
    e.weight = w;
    e.threshold = threshold;
    return e;
}

}  // namespace fixture_detail

//! OLTP surface calibrated to a Sysbench-like point: 52 knobs, 8 influential,
//! run-to-run CV 4.36%.
inline SyntheticSurface sysbench_like() {
    using namespace fixture_detail;
    SyntheticSurface s;
    s.catalog = reference_catalog();
    s.influential["innodb_buffer_pool_size_mb"] = monotone(0.55);
    s.influential["innodb_log_file_size_mb"] = monotone(0.45);
    s.influential["innodb_io_capacity"] = unimodal(0.35, 0.62, 0.20);
    s.influential["innodb_thread_concurrency"] = unimodal(0.20, 0.30, 0.22);
    s.influential["innodb_flush_log_at_trx_commit"] = monotone(0.14);
    s.influential["innodb_max_dirty_pages_pct"] = step(0.10, 0.35);
    s.influential["innodb_adaptive_hash_index"] = monotone(0.07);
    s.influential["innodb_read_io_threads"] = monotone(0.05);
    s.base_metric = 608.63;
    s.noise_cv = 0.0436;
    s.mode = SurfaceMode::Throughput;
    s.ramp_seconds = 20.0;
    return s;
}

//! OLTP surface calibrated to a TPC-C-like point: 10 influential knobs, two
//! pairwise interactions, run-to-run CV 6.24%. The shorter warm-up ramp keeps
//! very small probe windows meaningful.
inline SyntheticSurface tpcc_like() {
    using namespace fixture_detail;
    SyntheticSurface s;
    s.catalog = reference_catalog();
    s.influential["innodb_buffer_pool_size_mb"] = monotone(0.90);
    s.influential["innodb_log_file_size_mb"] = monotone(0.70);
    s.influential["innodb_io_capacity"] = unimodal(0.50, 0.55, 0.20);
    s.influential["innodb_write_io_threads"] = unimodal(0.35, 0.40, 0.25);
    s.influential["innodb_flush_log_at_trx_commit"] = monotone(0.30);
    s.influential["thread_cache_size"] = monotone(0.22);
    s.influential["innodb_max_dirty_pages_pct"] = step(0.18, 0.40);
    s.influential["innodb_purge_threads"] = monotone(0.14);
    s.influential["innodb_lru_scan_depth"] = unimodal(0.12, 0.50, 0.25);
    s.influential["innodb_page_cleaners"] = monotone(0.09);
    s.interactions.push_back({"innodb_buffer_pool_size_mb", "innodb_log_file_size_mb", 0.35});
    s.interactions.push_back({"innodb_io_capacity", "innodb_write_io_threads", 0.20});
    s.base_metric = 79.33;
    s.noise_cv = 0.0624;
    s.mode = SurfaceMode::Throughput;
    s.ramp_seconds = 8.0;
    return s;
}

//! OLAP surface calibrated to a TPC-H-like point: 22-query batch totalling
//! 80.13 s at factor 1, 5 influential knobs, CV 0.52%.
inline SyntheticSurface tpch_like() {
    using namespace fixture_detail;
    SyntheticSurface s;
    s.catalog = reference_catalog();
    s.influential["innodb_buffer_pool_size_mb"] = monotone(0.30);
    s.influential["sort_buffer_size_kb"] = monotone(0.22);
    s.influential["join_buffer_size_kb"] = monotone(0.15);
    s.influential["innodb_io_capacity"] = unimodal(0.10, 0.60, 0.20);
    s.influential["innodb_read_ahead_threshold"] = step(0.06, 0.90);
    s.base_metric = 1.0;
    s.noise_cv = 0.0052;
    s.mode = SurfaceMode::BatchTime;
    s.query_times = {9.8, 1.2, 3.4, 2.1, 5.6, 2.8, 4.9, 3.2, 7.5, 2.4, 1.9,
                     2.2, 6.1, 3.7, 1.6, 4.3, 5.2, 2.9, 3.8, 1.4, 2.6, 1.53};
    return s;
}

//! Surface with a long graded importance tail (24 influential knobs); used
//! by the ranking-stability study, where the top-20 cut depends on resolving
//! weak signals.
inline SyntheticSurface stability_like() {
    using namespace fixture_detail;
    SyntheticSurface s;
    s.catalog = reference_catalog();
    double w = 0.5;
    for (std::size_t i = 0; i < 24; ++i) {
        const auto& name = s.catalog[i].name;
        switch (i % 3) {
            case 0: s.influential[name] = monotone(w); break;
            case 1: s.influential[name] = unimodal(w, 0.3 + 0.02 * static_cast<double>(i), 0.25); break;
            case 2: s.influential[name] = step(w, 0.5); break;
        }
        w *= 0.87;
    }
    s.base_metric = 500.0;
    s.noise_cv = 0.03;
    s.mode = SurfaceMode::Throughput;
    s.ramp_seconds = 20.0;
    return s;
}

//! Built-in surface by name; names double as CLI target specs.
inline SyntheticSurface builtin_surface(const std::string& name) {
    if (name == "sysbench-like") return sysbench_like();
    if (name == "tpcc-like") return tpcc_like();
    if (name == "tpch-like") return tpch_like();
    if (name == "stability-like") return stability_like();
    throw std::invalid_argument("unknown built-in fixture: " + name);
}

}  // namespace dotune
