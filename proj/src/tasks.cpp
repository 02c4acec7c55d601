#include "alphaseq/tasks.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "alphaseq/rng.hpp"

namespace alphaseq {

namespace {

Slot fg(Arity a = Arity::One) { return {"I_fg", SlotKind::RgbaImage, a}; }
Slot bg() { return {"I_bg", SlotKind::RgbImage, Arity::One}; }
Slot comp() { return {"I_comp", SlotKind::RgbImage, Arity::One}; }
Slot alpha() { return {"alpha_fg", SlotKind::Alpha, Arity::One}; }
Slot trimap() { return {"M_trimap", SlotKind::Trimap, Arity::One}; }
Slot precise() { return {"M_precise", SlotKind::Mask, Arity::One}; }
Slot rough() { return {"M_rough", SlotKind::Mask, Arity::One}; }
Slot t_fg() { return {"T_fg", SlotKind::Text, Arity::One}; }
Slot t_bg() { return {"T_bg", SlotKind::Text, Arity::One}; }
Slot t_comp() { return {"T_comp", SlotKind::Text, Arity::One}; }

std::vector<TaskSpec> build_registry() {
    std::vector<TaskSpec> tasks;

    tasks.push_back({"Text-to-Image Generation",
                     "Text-to-Image",
                     {t_fg()},
                     {fg()},
                     {"Generate a full RGBA image of the described subject with accurate transparency.",
                      "Create a transparent-background image matching the description.",
                      "Produce an RGBA layer that depicts the prompt with a clean alpha channel."}});

    tasks.push_back({"Foreground-to-Background Generation",
                     "Layer-Conditioned Completion",
                     {fg(Arity::Many), t_bg()},
                     {bg()},
                     {"Generate a background scene that suits the given foreground layers.",
                      "Imagine and render the missing background behind these foregrounds.",
                      "Create a plausible background layer for the provided foregrounds."}});
    tasks.push_back({"Foreground-Conditioned Completion",
                     "Layer-Conditioned Completion",
                     {fg(Arity::Many), t_comp()},
                     {comp()},
                     {"Blend the given foreground layers into a complete scene matching the description.",
                      "Complete the full image around the provided foregrounds.",
                      "Compose the foregrounds into the described scene and return the blended image."}});
    tasks.push_back({"Background-to-Foreground Generation",
                     "Layer-Conditioned Completion",
                     {bg(), t_fg()},
                     {fg(Arity::Many)},
                     {"Generate foreground layers that naturally belong in this background.",
                      "Create the described foreground layers to place over the given background.",
                      "Render matching RGBA foregrounds for the provided background."}});
    tasks.push_back({"Background-Conditioned Completion",
                     "Layer-Conditioned Completion",
                     {bg(), t_comp()},
                     {comp()},
                     {"Complete the scene on top of the given background as described.",
                      "Fill this background with the described content and return the blended image.",
                      "Produce the full composite image implied by the background and the prompt."}});

    tasks.push_back({"Automatic (Mask-Free) Matting",
                     "Image Matting",
                     {comp()},
                     {fg()},
                     {"Isolate a clear foreground with defined edges and accurate transparency.",
                      "Pull out the foreground with fine edges and perfect transparency.",
                      "Automatically derive the visible subject from the photo with accurate transparency.",
                      "Extract a clear object with smooth edges and correct transparency."}});
    tasks.push_back({"Alpha-Conditioned Matting",
                     "Image Matting",
                     {comp(), alpha()},
                     {fg()},
                     {"Extract the foreground layer following the given alpha matte.",
                      "Use the provided alpha map to cut out the matching foreground.",
                      "Recover the RGBA foreground consistent with this alpha matte."}});
    tasks.push_back({"Trimap-Conditioned Matting",
                     "Image Matting",
                     {comp(), trimap()},
                     {fg()},
                     {"Extract the foreground guided by the given trimap.",
                      "Resolve the unknown band of the trimap and return the matted foreground.",
                      "Use the trimap regions to produce a precise RGBA foreground."}});
    tasks.push_back({"Precise Mask-Conditioned Matting",
                     "Image Matting",
                     {comp(), precise()},
                     {fg()},
                     {"Extract the foreground indicated by the precise mask.",
                      "Matte the region selected by the given mask with fine edge detail.",
                      "Cut out the masked subject with accurate transparency."}});
    tasks.push_back({"Rough Mask-Conditioned Matting",
                     "Image Matting",
                     {comp(), rough()},
                     {fg()},
                     {"Extract the foreground roughly covered by the given mask.",
                      "Refine the rough mask into a precise matted foreground.",
                      "Use the loose mask as guidance and return an accurate RGBA foreground."}});
    tasks.push_back({"Text-Conditioned (Referring) Matting",
                     "Image Matting",
                     {comp(), t_fg()},
                     {fg()},
                     {"Extract the foreground that matches the description with accurate transparency.",
                      "Matte the referred subject and preserve fine boundary detail.",
                      "Isolate the described object as an RGBA layer."}});

    tasks.push_back({"Automatic (Mask-Free) Object Removal",
                     "Object Removal",
                     {comp()},
                     {bg()},
                     {"Remove the most salient object and fill in the background naturally.",
                      "Erase the main subject and reconstruct the scene behind it.",
                      "Delete the prominent foreground and return the clean background."}});
    tasks.push_back({"Alpha-Conditioned Object Removal",
                     "Object Removal",
                     {comp(), alpha()},
                     {bg()},
                     {"Remove the object covered by the alpha matte and inpaint the background.",
                      "Erase the region selected by the alpha map and restore the scene.",
                      "Use the alpha matte to remove the subject and fill the hole."}});
    tasks.push_back({"Trimap-Conditioned Object Removal",
                     "Object Removal",
                     {comp(), trimap()},
                     {bg()},
                     {"Remove the object indicated by the trimap and reconstruct the background.",
                      "Erase the trimap foreground region and inpaint it seamlessly.",
                      "Clear the area marked by the trimap and return the background."}});
    tasks.push_back({"Precise Mask-Conditioned Object Removal",
                     "Object Removal",
                     {comp(), precise()},
                     {bg()},
                     {"Remove the precisely masked object and fill in the background.",
                      "Erase the masked region and restore the underlying scene.",
                      "Delete the selected object and inpaint the revealed area."}});
    tasks.push_back({"Rough Mask-Conditioned Object Removal",
                     "Object Removal",
                     {comp(), rough()},
                     {bg()},
                     {"Remove the object inside the rough mask and repair the background.",
                      "Clear everything the loose mask covers and inpaint naturally.",
                      "Use the rough mask as a removal region and return the clean background."}});

    tasks.push_back({"Automatic (Mask-Free) Layer Decomposition",
                     "Layer Decomposition",
                     {comp()},
                     {fg(Arity::Many), bg()},
                     {"Layer the image by separating its foreground from its background.",
                      "Separate the content of the image into background and foreground layers.",
                      "Split the image into distinct foreground and background layers.",
                      "Divide the visual into a foreground layer and a background layer."}});
    tasks.push_back({"Alpha-Conditioned Layer Decomposition",
                     "Layer Decomposition",
                     {comp(), alpha()},
                     {fg(), bg()},
                     {"Decompose the image into the alpha-selected foreground and the background.",
                      "Separate the layer indicated by the alpha matte from the rest of the scene.",
                      "Split the image into the matted foreground and the remaining background."}});
    tasks.push_back({"Trimap-Conditioned Layer Decomposition",
                     "Layer Decomposition",
                     {comp(), trimap()},
                     {fg(), bg()},
                     {"Decompose the image into the trimap-selected foreground and the background.",
                      "Use the trimap to separate the foreground layer from the background layer.",
                      "Split the scene into layers following the trimap."}});
    tasks.push_back({"Precise Mask-Conditioned Layer Decomposition",
                     "Layer Decomposition",
                     {comp(), precise()},
                     {fg(), bg()},
                     {"Decompose the image into the masked foreground and the background.",
                      "Separate the precisely masked layer from the rest of the image.",
                      "Split the image into the selected foreground and a clean background."}});
    tasks.push_back({"Rough Mask-Conditioned Layer Decomposition",
                     "Layer Decomposition",
                     {comp(), rough()},
                     {fg(), bg()},
                     {"Decompose the image into the roughly masked foreground and the background.",
                      "Separate the layer under the rough mask from the background.",
                      "Split the scene into the loosely selected foreground and its background."}});

    return tasks;
}

}  // namespace

const std::vector<TaskSpec>& list_tasks() {
    static const std::vector<TaskSpec> registry = build_registry();
    return registry;
}

const TaskSpec& find_task(const std::string& name) {
    for (const TaskSpec& t : list_tasks()) {
        if (t.name == name) return t;
    }
    throw UnknownTask("find_task: no task named '" + name + "'");
}

std::vector<std::string> validate_instance(const TaskSpec& spec, const TaskInstance& inst) {
    std::vector<std::string> violations;
    auto looks_like_path = [](const std::string& v) {
        const size_t dot = v.find_last_of('.');
        return dot != std::string::npos && dot + 1 < v.size() && v.find(' ') == std::string::npos;
    };
    for (const Slot& slot : spec.inputs) {
        auto it = inst.bindings.find(slot.symbol);
        if (it == inst.bindings.end() || it->second.empty()) {
            violations.push_back("missing slot " + slot.symbol);
            continue;
        }
        if (slot.arity == Arity::One && it->second.size() != 1) {
            violations.push_back("slot " + slot.symbol + " expects exactly one binding, got " +
                                 std::to_string(it->second.size()));
        }
        for (const std::string& v : it->second) {
            if (v.empty()) {
                violations.push_back("slot " + slot.symbol + " has an empty binding");
            } else if (slot.kind != SlotKind::Text && !looks_like_path(v)) {
                violations.push_back("slot " + slot.symbol + " expects a file path, got text");
            }
        }
    }
    for (const auto& [symbol, values] : inst.bindings) {
        (void)values;
        const bool known = std::any_of(spec.inputs.begin(), spec.inputs.end(),
                                       [&](const Slot& s) { return s.symbol == symbol; });
        if (!known) {
            violations.push_back("unexpected slot " + symbol);
        }
    }
    return violations;
}

std::string instruction_for(const TaskSpec& spec, uint64_t seed) {
    if (spec.instruction_templates.empty()) {
        throw Error("instruction_for: task has no instruction templates");
    }
    Rng rng(seed);
    return spec.instruction_templates[rng.uniform_int(spec.instruction_templates.size())];
}

std::string slot_kind_name(SlotKind kind) {
    switch (kind) {
        case SlotKind::RgbaImage: return "rgba_image";
        case SlotKind::RgbImage: return "rgb_image";
        case SlotKind::Alpha: return "alpha";
        case SlotKind::Trimap: return "trimap";
        case SlotKind::Mask: return "mask";
        case SlotKind::Text: return "text";
    }
    return "unknown";
}

std::string registry_to_json() {
    nlohmann::json doc;
    doc["tasks"] = nlohmann::json::array();
    auto slot_json = [](const Slot& s) {
        return nlohmann::json{{"symbol", s.symbol},
                              {"kind", slot_kind_name(s.kind)},
                              {"arity", s.arity == Arity::One ? "one" : "many"}};
    };
    for (const TaskSpec& t : list_tasks()) {
        nlohmann::json j;
        j["name"]     = t.name;
        j["category"] = t.category;
        j["inputs"]   = nlohmann::json::array();
        for (const Slot& s : t.inputs) j["inputs"].push_back(slot_json(s));
        j["outputs"] = nlohmann::json::array();
        for (const Slot& s : t.outputs) j["outputs"].push_back(slot_json(s));
        j["instruction_templates"] = t.instruction_templates;
        doc["tasks"].push_back(j);
    }
    return doc.dump(2) + "\n";
}

}  // namespace alphaseq
