#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alphaseq/error.hpp"

namespace alphaseq {

enum class SlotKind { RgbaImage, RgbImage, Alpha, Trimap, Mask, Text };
enum class Arity { One, Many };

struct Slot {
    std::string symbol;  // I_fg, I_bg, I_comp, alpha_fg, M_trimap, M_precise, M_rough, T_fg, T_bg, T_comp
    SlotKind kind = SlotKind::Text;
    Arity arity   = Arity::One;
};

struct TaskSpec {
    std::string name;
    std::string category;
    std::vector<Slot> inputs;
    std::vector<Slot> outputs;
    std::vector<std::string> instruction_templates;
};

// All 21 task specs across the 5 categories, in registry order.
const std::vector<TaskSpec>& list_tasks();

const TaskSpec& find_task(const std::string& name);  // throws UnknownTask

struct TaskInstance {
    std::string task;
    // symbol -> bound artifact references (file paths for image-like slots,
    // literal text for text slots)
    std::map<std::string, std::vector<std::string>> bindings;
};

// Returns human-readable violations; empty means the instance conforms.
std::vector<std::string> validate_instance(const TaskSpec& spec, const TaskInstance& inst);

// One instruction string for the task, chosen by seed among its variants.
std::string instruction_for(const TaskSpec& spec, uint64_t seed);

std::string slot_kind_name(SlotKind kind);
std::string registry_to_json();  // stable structured dump, used as the shipped asset

}  // namespace alphaseq
