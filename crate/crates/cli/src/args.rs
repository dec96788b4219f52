use clap::ValueEnum;

/// Exponent grid parsed from either `start:step:end` or a comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

pub fn parse_grid(spec: &str) -> Result<Grid, String> {
    grid_values(spec).map(Grid)
}

fn grid_values(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, step, end] = parts.as_slice() else {
            return Err(format!("grid range `{spec}` must look like start:step:end"));
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
        let (start, step, end) = (num(start)?, num(step)?, num(end)?);
        if step.is_nan() || step <= 0.0 || end < start {
            return Err(format!(
                "grid range `{spec}` needs step > 0 and end >= start"
            ));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| start + i as f64 * step).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}
