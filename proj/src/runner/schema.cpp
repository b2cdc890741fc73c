#include "tubemass/runner/scenario.hpp"

namespace tubemass::runner {

namespace {

// Kept as one literal so the document reads like the file it describes.
constexpr const char* kSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "tubemass scenario",
  "type": "object",
  "required": ["schema_version", "name", "task", "seed"],
  "additionalProperties": false,
  "properties": {
    "schema_version": {"const": 1},
    "name": {"type": "string", "minLength": 1, "pattern": "^[^/\\\\]+$"},
    "description": {"type": "string"},
    "task": {"enum": ["tube-mass", "monotone", "convex", "zeros", "hausdorff", "potential", "expint", "verify-forms"]},
    "seed": {"type": "integer", "minimum": 0},
    "n": {"type": "integer", "minimum": 1, "maximum": 4},
    "sampling": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "samples": {"type": "integer", "minimum": 1},
        "batches": {"type": "integer", "minimum": 2, "maximum": 4096},
        "epsilon_factor": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "manifold": {"$ref": "#/$defs/manifold"},
    "current": {"$ref": "#/$defs/current"},
    "profile": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "r": {"type": "number", "exclusiveMinimum": 0},
        "t0": {"type": "number", "exclusiveMinimum": 0},
        "points": {"type": "integer", "minimum": 2},
        "span": {"type": "number", "exclusiveMinimum": 1},
        "t_grid": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
        "c_bound": {"type": "number"}
      }
    },
    "weight": {
      "type": "object",
      "required": ["a", "inner_radius", "t0"],
      "additionalProperties": false,
      "properties": {
        "a": {"oneOf": [{"type": "number", "minimum": 0}, {"const": "auto"}]},
        "inner_radius": {"type": "number", "exclusiveMinimum": 0},
        "t0": {"type": "number", "exclusiveMinimum": 0},
        "psh_samples": {"type": "integer", "minimum": 1}
      }
    },
    "convex": {
      "type": "object",
      "required": ["kind", "a"],
      "additionalProperties": false,
      "properties": {
        "kind": {"enum": ["point", "box", "segment", "ball"]},
        "a": {"$ref": "#/$defs/reals"},
        "b": {"$ref": "#/$defs/reals"},
        "radius": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "zeros": {
      "type": "object",
      "required": ["k_box", "epsilons"],
      "additionalProperties": false,
      "properties": {
        "k_box": {"$ref": "#/$defs/box"},
        "grid": {"type": "integer", "minimum": 2},
        "epsilons": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
        "order": {"enum": ["chain", "input", "shuffled"]}
      }
    },
    "potential": {
      "type": "object",
      "required": ["alpha"],
      "additionalProperties": false,
      "properties": {
        "mode": {"enum": ["exp-bound", "kernel"]},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "measure": {"$ref": "#/$defs/measure"},
        "z_radius": {"type": "number", "exclusiveMinimum": 0},
        "z_count": {"type": "integer", "minimum": 1},
        "s_grid": {"$ref": "#/$defs/reals"},
        "k_box": {"$ref": "#/$defs/box"},
        "foot": {"$ref": "#/$defs/reals"},
        "deltas": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 2},
        "order": {"type": "integer", "minimum": 1, "maximum": 64}
      }
    },
    "expint": {
      "type": "object",
      "required": ["phi", "alpha", "clip_levels", "rules"],
      "additionalProperties": false,
      "properties": {
        "phi": {"$ref": "#/$defs/field"},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "clip_levels": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
        "rules": {"type": "array", "items": {"$ref": "#/$defs/rule"}, "minItems": 1}
      }
    },
    "forms": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "n_max": {"type": "integer", "minimum": 1, "maximum": 4},
        "count": {"type": "integer", "minimum": 1}
      }
    }
  },
  "$defs": {
    "reals": {"type": "array", "items": {"type": "number"}},
    "box": {
      "type": "array",
      "minItems": 1,
      "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
    },
    "term": {
      "type": "object",
      "required": ["exponents"],
      "additionalProperties": false,
      "properties": {
        "exponents": {"type": "array", "items": {"type": "integer", "minimum": 0, "maximum": 31}},
        "coeff_re": {"type": "number"},
        "coeff_im": {"type": "number"}
      }
    },
    "terms": {"type": "array", "items": {"$ref": "#/$defs/term"}},
    "field": {
      "type": "object",
      "required": ["kind"],
      "properties": {
        "kind": {"enum": ["poly", "constant", "norm_squared", "log_abs", "log", "sqrt", "exp", "square", "scale", "sum", "product"]},
        "terms": {"$ref": "#/$defs/terms"},
        "value": {"type": "number"},
        "factor": {"type": "number"},
        "arg": {"$ref": "#/$defs/field"},
        "args": {"type": "array", "items": {"$ref": "#/$defs/field"}, "minItems": 1}
      },
      "additionalProperties": false
    },
    "manifold": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "catalog": {"enum": ["real_space", "real_plane_pair", "complex_line", "small_graph", "curved", "siegel", "c_r_zero", "sphere"]},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "eps": {"type": "number"},
        "custom": {
          "type": "object",
          "required": ["rho"],
          "additionalProperties": false,
          "properties": {
            "name": {"type": "string"},
            "rho": {"type": "array", "items": {"$ref": "#/$defs/field"}, "minItems": 1},
            "chart": {
              "type": "object",
              "required": ["params", "coords"],
              "additionalProperties": false,
              "properties": {
                "params": {"$ref": "#/$defs/box"},
                "coords": {"type": "array", "items": {"$ref": "#/$defs/terms"}}
              }
            }
          }
        }
      },
      "oneOf": [{"required": ["catalog"]}, {"required": ["custom"]}]
    },
    "factor": {
      "type": "object",
      "required": ["kind"],
      "additionalProperties": false,
      "properties": {
        "kind": {"enum": ["disc", "rect"]},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "re": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "im": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
      }
    },
    "current": {
      "type": "object",
      "required": ["kind"],
      "additionalProperties": false,
      "properties": {
        "kind": {"enum": ["divisor", "variety", "smooth"]},
        "terms": {"$ref": "#/$defs/terms"},
        "map": {"type": "array", "items": {"$ref": "#/$defs/terms"}},
        "domain": {"type": "array", "items": {"$ref": "#/$defs/factor"}},
        "phi": {"$ref": "#/$defs/field"},
        "check_radius": {"type": "number", "exclusiveMinimum": 0},
        "check_samples": {"type": "integer", "minimum": 1}
      }
    },
    "measure": {
      "type": "object",
      "required": ["kind"],
      "additionalProperties": false,
      "properties": {
        "kind": {"enum": ["ball", "trace", "atoms"]},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "per_axis": {"type": "integer", "minimum": 1},
        "phi": {"$ref": "#/$defs/field"},
        "points": {"type": "array", "items": {"$ref": "#/$defs/reals"}},
        "weights": {"type": "array", "items": {"type": "number", "minimum": 0}}
      }
    },
    "rule": {
      "type": "object",
      "required": ["lo", "hi"],
      "additionalProperties": false,
      "properties": {
        "kind": {"enum": ["gauss", "graded"]},
        "lo": {"type": "number"},
        "hi": {"type": "number"},
        "order": {"type": "integer", "minimum": 1, "maximum": 64},
        "focus": {"type": "number"},
        "floor": {"type": "number", "exclusiveMinimum": 0}
      }
    }
  }
})json";

}  // namespace

Json schema() { return Json::parse(kSchema); }

}  // namespace tubemass::runner
