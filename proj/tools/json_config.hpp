#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <istream>
#include <string>
#include <vector>

namespace holonorm::cli {

/**
 * CLI11 config reader for JSON files. Keys at the top level apply to the
 * selected subcommand; an object keyed by a subcommand name applies to that
 * subcommand only. Arrays become repeated values, so "sweep": [64, 128]
 * behaves like --sweep 64,128.
 */
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* app) : app_(app) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        throw CLI::ConfigError("writing config files is not supported");
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(input);
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConfigError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config file must hold a JSON object");

        std::vector<std::string> selected;
        for (const CLI::App* sub : app_->get_subcommands()) selected.push_back(sub->get_name());

        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [inner, v] : value.items()) items.push_back(item({key}, inner, v));
            } else {
                items.push_back(item(selected, key, value));
            }
        }
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConfigError("config values must be strings, numbers, booleans or arrays of those");
    }

    static CLI::ConfigItem item(std::vector<std::string> parents, const std::string& name, const nlohmann::json& v) {
        CLI::ConfigItem it;
        it.parents = std::move(parents);
        it.name = name;
        if (v.is_array()) {
            for (const auto& e : v) it.inputs.push_back(scalar(e));
        } else {
            it.inputs.push_back(scalar(v));
        }
        return it;
    }

    const CLI::App* app_;
};

}  // namespace holonorm::cli
