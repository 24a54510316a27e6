use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub const TABLE: &[&str] = &["k", "ell", "count"];
pub const TABLE_BRIDGE: &[&str] = &["k", "ell", "count", "bridge_count"];
pub const CONSTANTS: &[&str] = &["ell", "b", "c", "d"];
pub const DECOMPOSE: &[&str] = &["ell", "s", "omega"];
pub const TREEPOLY: &[&str] = &["a", "n", "y", "value"];
pub const TREEPOLY_SADDLE: &[&str] = &["a", "n", "y", "value", "rho", "u0", "saddle_ln", "ratio"];
pub const ALPHA: &[&str] = &["n", "k", "ell", "count", "alpha", "alpha_float", "identity_holds"];
pub const EXPECT: &[&str] = &[
    "n",
    "ell",
    "E_Y",
    "E_Z",
    "E_V",
    "V_formula_ratio",
    "cutoff_used",
    "cutoff_flagged",
    "exact_k_ceiling",
    "tail_model",
];
pub const SIMULATE: &[&str] = &[
    "n",
    "lmax",
    "trials",
    "seed",
    "edges_mean",
    "ell",
    "V_mean",
    "V_se",
    "X_mean",
    "Y_mean",
    "Y_se",
    "Z_mean",
    "Z_se",
    "Y_fact2_mean",
    "Y_eq1_frac",
];
pub const VERIFY: &[&str] = &["name", "criterion", "passed", "seconds"];

pub fn document() -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "encoding": {
            "integers": "full decimal; JSON strings when unbounded",
            "rationals": "\"num/den\" strings",
            "floats": "shortest round-trip decimal",
        },
        "subcommands": {
            "table": {
                "csv": TABLE,
                "csv_with_bridges": TABLE_BRIDGE,
                "json": {"kmax": "int", "lmax": "int", "bridge": "null | {r, restriction}", "rows": TABLE_BRIDGE},
            },
            "constants": {"csv": CONSTANTS, "json": {"rows": CONSTANTS}},
            "decompose": {"csv": DECOMPOSE, "json": {"ell": "int", "order": "int", "s_min": "int", "omega": [{"s": "int", "omega": "num/den"}], "b": "num/den", "c": "num/den"}},
            "treepoly": {"csv": TREEPOLY, "csv_with_saddle": TREEPOLY_SADDLE, "json": TREEPOLY_SADDLE},
            "alpha": {"csv": ALPHA, "json": ALPHA},
            "expect": {"csv": EXPECT, "json": EXPECT},
            "simulate": {
                "csv": SIMULATE,
                "json": {
                    "n": "int", "lmax": "int", "trials": "int", "seed": "u64", "edges_mean": "float",
                    "per_ell": &SIMULATE[5..],
                },
            },
            "verify": {
                "csv": VERIFY,
                "json": {"level": "quick | full", "passed": "bool", "failures": "[name]",
                         "checks": ["name", "criterion", "passed", "detail", "seconds"]},
            },
        },
    })
}
