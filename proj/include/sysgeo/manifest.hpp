#pragma once

#include "sysgeo/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>

namespace sysgeo {

/// Header of every JSON report: what ran, with which parameters, when.
/// Round-trips losslessly through to_json/from_json.
struct RunManifest {
    std::string command;
    nlohmann::json parameters;  // flag values, including seeds
    std::string version = kVersion;
    std::string timestamp;      // ISO 8601 UTC

    static std::string now_utc() {
        const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[48];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                      tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
        return buf;
    }

    nlohmann::json to_json() const {
        return {{"command", command},
                {"parameters", parameters},
                {"version", version},
                {"timestamp", timestamp}};
    }

    static RunManifest from_json(const nlohmann::json& j) {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.parameters = j.at("parameters");
        m.version = j.at("version").get<std::string>();
        m.timestamp = j.at("timestamp").get<std::string>();
        return m;
    }

    friend bool operator==(const RunManifest& a, const RunManifest& b) {
        return a.command == b.command && a.parameters == b.parameters &&
               a.version == b.version && a.timestamp == b.timestamp;
    }
};

}  // namespace sysgeo
