use crate::error::CliError;

/// Uniform 1-D grid `min ..= max` with `steps` points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Result<Self, CliError> {
        if !min.is_finite() || !max.is_finite() || !(min < max) {
            return Err(CliError::Usage(format!(
                "{name} sweep needs finite min < max, got [{min}, {max}]"
            )));
        }
        if steps < 2 {
            return Err(CliError::Usage(format!("{name} sweep needs at least 2 steps, got {steps}")));
        }
        Ok(SweepSpec {
            name: name.to_string(),
            min,
            max,
            steps,
        })
    }

    /// Grid points; the last one is `max` exactly.
    pub fn points(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + span * (i as f64 / last)
                }
            })
            .collect()
    }
}
