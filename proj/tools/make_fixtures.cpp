/*
 * make_fixtures.cpp
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

// Regenerates the JSON fixture files shipped under fixtures/.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "dotune/fixtures.hpp"

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);
    auto dump = [&](const std::string& name, const nlohmann::json& j) {
        std::ofstream out(dir + "/" + name);
        out << j.dump(2) << "\n";
        std::cout << dir << "/" << name << "\n";
    };
    dump("sysbench_like.json", dotune::to_json(dotune::sysbench_like()));
    dump("tpcc_like.json", dotune::to_json(dotune::tpcc_like()));
    dump("tpch_like.json", dotune::to_json(dotune::tpch_like()));
    dump("stability_like.json", dotune::to_json(dotune::stability_like()));
    dump("reference_catalog.json", dotune::to_json(dotune::reference_catalog()));
    return 0;
}
