use serde_json::{json, Value as Json};

use super::{Solution, StageStats};
use crate::semifield::{Carrier, Mode, Semifield, Value};

/// Exact values print as rationals; float values with 17 significant digits.
pub fn format_value<C: Carrier>(sf: &Semifield<C>, v: &Value<C>) -> String {
    match (C::MODE, v) {
        (Mode::Float, Value::Finite(c)) => format!("{:.16e}", c.c_to_f64()),
        _ => sf.format(v),
    }
}

pub fn solution_document<C: Carrier>(sf: &Semifield<C>, sol: &Solution<C>) -> Json {
    let fmt = |v: &Value<C>| format_value(sf, v);
    json!({
        "status": sol.status,
        "semifield": sf.id().name(),
        "mode": C::MODE.name(),
        "mu": fmt(&sol.mu),
        "point": sol.point.iter().map(fmt).collect::<Vec<_>>(),
        "intervals": sol
            .intervals
            .iter()
            .map(|iv| [fmt(&iv.lower), fmt(&iv.upper)])
            .collect::<Vec<_>>(),
    })
}

pub fn stats_document(stats: &[StageStats]) -> Json {
    let total: f64 = stats.iter().map(|s| s.elapsed_ms).sum();
    json!({
        "stages": stats,
        "total_ms": total,
    })
}
