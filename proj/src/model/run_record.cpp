#include "adcraft/run_record.hpp"

#include "adcraft/errors.hpp"

namespace adcraft {

using nlohmann::json;

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v)
{
    if (v)
        j[key] = *v;
    else
        j[key] = nullptr;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    return it->get<T>();
}

json size_json(CanvasSize s)
{
    return json{{"width", s.width}, {"height", s.height}};
}

CanvasSize size_from(const json& j)
{
    return {j.at("width").get<int>(), j.at("height").get<int>()};
}

} // namespace

json to_json(const UsageRecord& r)
{
    return json{{"agent_role", r.agent_role},       {"provider", r.provider}, {"prompt_tokens", r.prompt_tokens},
                {"completion_tokens", r.completion_tokens}, {"images", r.images},     {"megapixels", r.megapixels}};
}

UsageRecord usage_from_json(const json& j)
{
    UsageRecord r;
    r.agent_role = j.value("agent_role", "");
    r.provider = j.value("provider", "");
    r.prompt_tokens = j.value("prompt_tokens", 0LL);
    r.completion_tokens = j.value("completion_tokens", 0LL);
    r.images = j.value("images", 0);
    r.megapixels = j.value("megapixels", 0.0);
    return r;
}

json to_json(const CostBreakdown& c)
{
    return json{{"llm_cost", c.llm_cost},           {"image_cost", c.image_cost},
                {"total", c.total},                 {"prompt_tokens", c.prompt_tokens},
                {"completion_tokens", c.completion_tokens}, {"images", c.images}};
}

json to_json(const RunRecord& r)
{
    json j;
    j["request_id"] = r.request_id;
    j["size"] = size_json(r.size);
    j["requirement_text"] = r.requirement_text;
    if (r.objectives)
        j["objectives"] = json{{"primary_purpose", r.objectives->primary_purpose},
                               {"target_audience", r.objectives->target_audience},
                               {"mood_tone", r.objectives->mood_tone}};
    else
        j["objectives"] = nullptr;
    if (r.background) {
        const auto& b = *r.background;
        json bj;
        bj["found_existing"] = b.found_existing;
        bj["path"] = b.path;
        put_optional(bj, "source_path", b.source_path);
        put_optional(bj, "description", b.description);
        bj["attempts"] = b.attempts;
        bj["still_has_text"] = b.still_has_text;
        bj["prompt_history"] = b.prompt_history;
        bj["generated_size"] = b.generated_size ? size_json(*b.generated_size) : json(nullptr);
        j["background"] = bj;
    } else {
        j["background"] = nullptr;
    }
    j["logo_path"] = r.logo_path;
    j["iterations"] = json::array();
    for (const auto& it : r.iterations) {
        json ij;
        ij["t"] = it.t;
        ij["blueprint"] = it.blueprint_path;
        ij["svg"] = it.svg_path;
        ij["render"] = it.render_path;
        ij["verdict"] = it.verdict;
        ij["feedback"] = it.feedback;
        ij["verdict_parsed"] = it.verdict_parsed;
        ij["structural_diff"] = it.structural_diff;
        put_optional(ij, "modifications", it.modifications);
        j["iterations"].push_back(ij);
    }
    j["variations"] = json::array();
    for (const auto& v : r.variations)
        j["variations"].push_back(
            json{{"index", v.index}, {"blueprint", v.blueprint_path}, {"svg", v.svg_path}, {"render", v.render_path}});
    put_optional(j, "figma_code", r.figma_code_path);
    put_optional(j, "figma_manifest", r.figma_manifest_path);
    j["stages"] = r.stages;
    j["usage"] = json::array();
    for (const auto& u : r.usage)
        j["usage"].push_back(to_json(u));
    j["cost"] = to_json(r.cost);
    j["status"] = r.status;
    put_optional(j, "failed_stage", r.failed_stage);
    put_optional(j, "error", r.error);
    j["final_verdict"] = r.final_verdict;
    return j;
}

RunRecord run_record_from_json(const json& j)
{
    try {
        RunRecord r;
        r.request_id = j.at("request_id").get<std::string>();
        r.size = size_from(j.at("size"));
        r.requirement_text = j.value("requirement_text", "");
        if (auto o = j.find("objectives"); o != j.end() && !o->is_null())
            r.objectives = BannerObjectives{o->at("primary_purpose").get<std::string>(),
                                            o->at("target_audience").get<std::string>(),
                                            o->at("mood_tone").get<std::string>()};
        if (auto b = j.find("background"); b != j.end() && !b->is_null()) {
            BackgroundProvenance bp;
            bp.found_existing = b->value("found_existing", false);
            bp.path = b->value("path", "");
            bp.source_path = get_optional<std::string>(*b, "source_path");
            bp.description = get_optional<std::string>(*b, "description");
            bp.attempts = b->value("attempts", 0);
            bp.still_has_text = b->value("still_has_text", false);
            bp.prompt_history = b->value("prompt_history", std::vector<std::string>{});
            if (auto gs = b->find("generated_size"); gs != b->end() && !gs->is_null())
                bp.generated_size = size_from(*gs);
            r.background = bp;
        }
        r.logo_path = j.value("logo_path", "");
        for (const auto& ij : j.value("iterations", json::array())) {
            IterationRecord it;
            it.t = ij.at("t").get<int>();
            it.blueprint_path = ij.value("blueprint", "");
            it.svg_path = ij.value("svg", "");
            it.render_path = ij.value("render", "");
            it.verdict = ij.value("verdict", "");
            it.feedback = ij.value("feedback", "");
            it.verdict_parsed = ij.value("verdict_parsed", true);
            it.structural_diff = ij.value("structural_diff", std::vector<std::string>{});
            it.modifications = get_optional<std::string>(ij, "modifications");
            r.iterations.push_back(std::move(it));
        }
        for (const auto& vj : j.value("variations", json::array()))
            r.variations.push_back(VariationRecord{vj.at("index").get<int>(), vj.value("blueprint", ""),
                                                   vj.value("svg", ""), vj.value("render", "")});
        r.figma_code_path = get_optional<std::string>(j, "figma_code");
        r.figma_manifest_path = get_optional<std::string>(j, "figma_manifest");
        r.stages = j.value("stages", std::vector<std::string>{});
        for (const auto& uj : j.value("usage", json::array()))
            r.usage.push_back(usage_from_json(uj));
        if (auto c = j.find("cost"); c != j.end() && c->is_object()) {
            r.cost.llm_cost = c->value("llm_cost", 0.0);
            r.cost.image_cost = c->value("image_cost", 0.0);
            r.cost.total = c->value("total", 0.0);
            r.cost.prompt_tokens = c->value("prompt_tokens", 0LL);
            r.cost.completion_tokens = c->value("completion_tokens", 0LL);
            r.cost.images = c->value("images", 0);
        }
        r.status = j.value("status", "running");
        r.failed_stage = get_optional<std::string>(j, "failed_stage");
        r.error = get_optional<std::string>(j, "error");
        r.final_verdict = j.value("final_verdict", "");
        return r;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed run record: ") + e.what());
    }
}

} // namespace adcraft
