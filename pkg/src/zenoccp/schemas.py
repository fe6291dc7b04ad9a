"""JSON schemas for the CLI's inputs and reports (JSON Schema draft 2020-12)."""

ASSIGNMENT = {
    "type": "object",
    "required": ["N", "M", "d", "mu", "x1", "yM"],
    "properties": {
        "N": {"type": "integer", "minimum": 1},
        "M": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 2},
        "mu": {"type": "integer", "minimum": 0},
        "x1": {"type": "integer"},
        "pairs": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        },
        "yM": {"type": "integer"},
    },
}

_prob = {"type": "number", "minimum": 0, "maximum": 1}

EXACT_ROW = {
    "type": "object",
    "required": ["assignment", "truth", "B", "classical", "PE", "P1", "P2", "classical_estimate", "bound_pe", "bound_p1"],
    "properties": {
        "assignment": {"type": ["string", "object"]},
        "truth": {"type": ["integer", "null"]},
        "B": {"type": ["integer", "null"]},
        "classical": _prob,
        "PE": _prob,
        "P1": _prob,
        "P2": _prob,
        "classical_estimate": _prob,
        "bound_pe": _prob,
        "bound_p1": _prob,
    },
}

REPRO_REPORT = {
    "type": "object",
    "required": ["rows", "mean_exp_1", "mean_exp_2", "mean_ideal_1", "mean_ideal_2", "findings"],
    "properties": {
        "rows": {
            "type": "array",
            "minItems": 40,
            "maxItems": 40,
            "items": {
                "type": "object",
                "required": ["index", "ideal_p1", "ideal_p2", "measured_p1", "measured_p2", "residual_1", "residual_2"],
                "properties": {
                    "index": {"type": "integer", "minimum": 1, "maximum": 40},
                    "ideal_p1": _prob,
                    "ideal_p2": _prob,
                    "measured_p1": _prob,
                    "measured_p2": _prob,
                    "residual_1": {"type": "number"},
                    "residual_2": {"type": "number"},
                },
            },
        },
        "mean_exp_1": _prob,
        "mean_exp_2": _prob,
        "mean_ideal_1": _prob,
        "mean_ideal_2": _prob,
        "stated_avg_1": _prob,
        "stated_avg_2": _prob,
        "classical": _prob,
        "bound_1": _prob,
        "bound_2": _prob,
        "findings": {"type": "array", "items": {"type": "string"}},
    },
}

# CSV headers emitted by the CLI, in column order
MONTECARLO_COLUMNS = ["param", "value", "protocol", "trials", "success", "stderr", "exact", "bound"]
SCALING_COLUMNS = ["N", "classical_error", "p1_worst_error", "classical_estimate", "p1_bound_deficit"]
EFFICIENCY_COLUMNS = ["eta", "protocol", "ideal", "adjusted"]
