//! Plain-text experiment specs: one `[section]` per experiment, `key = value`
//! lines, `#`/`;` comments. Missing keys fall back to the study defaults.

use super::{ExperimentSpec, Method, ThetaSpec};
use crate::datagen::DataLaw;
use crate::error::{Error, Result};
use crate::pivots::DenominatorMode;
use crate::weights::WeightScheme;
use std::path::Path;

/// Seed used when a spec does not pin one.
pub const DEFAULT_SEED: u64 = 20260822;

#[derive(Default)]
struct Section {
    id: String,
    law: Option<DataLaw>,
    weights: Option<WeightScheme>,
    method: Option<Method>,
    theta: Option<ThetaSpec>,
    mode: Option<DenominatorMode>,
    n: Option<usize>,
    replications: Option<usize>,
    alpha: Option<f64>,
    resamples: Option<usize>,
    seed: Option<u64>,
}

impl Section {
    fn build(self) -> Result<ExperimentSpec> {
        let id = self.id;
        let law = self
            .law
            .ok_or_else(|| Error::Config(format!("[{id}] is missing the `law` key")))?;
        let n = self
            .n
            .ok_or_else(|| Error::Config(format!("[{id}] is missing the `n` key")))?;
        // Without an explicit method, weights imply the matching randomized
        // method (triangular schemes solve per-n, symmetric schemes centered
        // at their mean run the window-at-mean variant) and no weights mean
        // classical.
        let method = self.method.unwrap_or(match &self.weights {
            Some(s) if s.triangular() => Method::MethodI1,
            Some(s) if s.symmetric() && matches!(self.theta, Some(ThetaSpec::AtMean)) => {
                Method::MethodII
            }
            Some(_) => Method::MethodI,
            None => Method::ClassicalT,
        });
        let theta = match (self.theta, method) {
            (Some(t), _) => t,
            (None, Method::MethodII) => ThetaSpec::AtMean,
            (None, Method::MethodI1 | Method::MethodI2) => {
                ThetaSpec::Solve { delta: 1e-4, side: crate::solver::Side::AboveMean }
            }
            (None, Method::ClassicalT | Method::BootstrapT) => ThetaSpec::AtMean,
            (None, Method::MethodI) => {
                return Err(Error::Config(format!(
                    "[{id}] uses method I and must set `theta` (a number or solve(delta))"
                )))
            }
        };
        let mut spec = ExperimentSpec::new(id, law, method, n);
        spec.weights = self.weights;
        spec.theta = theta;
        if let Some(mode) = self.mode {
            spec.mode = mode;
        }
        if let Some(r) = self.replications {
            spec.replications = r;
        }
        if let Some(a) = self.alpha {
            spec.alpha = a;
        }
        if let Some(b) = self.resamples {
            spec.resamples = b;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Parse a spec document into experiments, in file order.
pub fn parse_config(text: &str) -> Result<Vec<ExperimentSpec>> {
    let mut specs = Vec::new();
    let mut current: Option<Section> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let id = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::Config(format!("line {lineno}: unclosed section header")))?
                .trim();
            if id.is_empty() {
                return Err(Error::Config(format!("line {lineno}: empty section name")));
            }
            if let Some(done) = current.take() {
                specs.push(done.build()?);
            }
            current = Some(Section { id: id.to_string(), ..Section::default() });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {lineno}: expected `key = value`, got `{line}`"))
        })?;
        let section = current.as_mut().ok_or_else(|| {
            Error::Config(format!("line {lineno}: keys must follow a [section] header"))
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_count = |what: &str| -> Result<usize> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("line {lineno}: bad {what} `{value}`")))
        };
        match key {
            "law" => section.law = Some(value.parse()?),
            "weights" => section.weights = Some(value.parse()?),
            "method" => section.method = Some(value.parse()?),
            "theta" => section.theta = Some(value.parse()?),
            "mode" => section.mode = Some(value.parse()?),
            "n" => section.n = Some(parse_count("sample size")?),
            "reps" | "replications" => section.replications = Some(parse_count("count")?),
            "resamples" => section.resamples = Some(parse_count("count")?),
            "alpha" => {
                section.alpha = Some(value.parse().map_err(|_| {
                    Error::Config(format!("line {lineno}: bad alpha `{value}`"))
                })?)
            }
            "seed" => {
                section.seed = Some(value.parse().map_err(|_| {
                    Error::Config(format!("line {lineno}: bad seed `{value}`"))
                })?)
            }
            other => {
                return Err(Error::Config(format!("line {lineno}: unknown key `{other}`")));
            }
        }
    }
    if let Some(done) = current.take() {
        specs.push(done.build()?);
    }
    if specs.is_empty() {
        return Err(Error::Config("the spec document declares no experiments".into()));
    }
    Ok(specs)
}

/// Read and parse a spec file.
pub fn parse_config_file(path: impl AsRef<Path>) -> Result<Vec<ExperimentSpec>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Side;

    const DOC: &str = "\
# coverage studies
[exp-chisq]
law = exponential(1)
weights = chisq(7)
theta = 9.3
n = 30
reps = 500
seed = 11

[lognormal-classical]
law = lognormal(0,1)
n = 100

[triangular]
law = lognormal(0,1)
weights = multinomial-sym
method = I.2
n = 10
";

    #[test]
    fn parses_sections_with_defaults() {
        let specs = parse_config(DOC).unwrap();
        assert_eq!(specs.len(), 3);

        let chisq = &specs[0];
        assert_eq!(chisq.id, "exp-chisq");
        assert_eq!(chisq.method, Method::MethodI);
        assert_eq!(chisq.theta, ThetaSpec::Fixed(9.3));
        assert_eq!(chisq.replications, 500);
        assert_eq!(chisq.seed, 11);
        assert_eq!(chisq.alpha, 0.05);

        let classical = &specs[1];
        assert_eq!(classical.method, Method::ClassicalT);
        assert!(classical.weights.is_none());
        assert_eq!(classical.seed, DEFAULT_SEED);
        assert_eq!(classical.replications, 1000);

        let triangular = &specs[2];
        assert_eq!(triangular.method, Method::MethodI2);
        assert_eq!(
            triangular.theta,
            ThetaSpec::Solve { delta: 1e-4, side: Side::AboveMean }
        );
    }

    #[test]
    fn triangular_weights_default_to_their_method() {
        let doc = "[t]\nlaw = exponential(1)\nweights = multinomial-sym\nn = 20\n";
        let specs = parse_config(doc).unwrap();
        assert_eq!(specs[0].method, Method::MethodI1);
    }

    #[test]
    fn method_one_requires_theta() {
        let doc = "[t]\nlaw = exponential(1)\nweights = chisq(7)\nn = 20\n";
        let err = parse_config(doc).unwrap_err();
        assert!(err.to_string().contains("theta"), "{err}");
    }

    #[test]
    fn rejects_unknown_keys_and_headerless_lines() {
        let doc = "[t]\nlaw = exponential(1)\nn = 20\nshoesize = 43\n";
        assert!(parse_config(doc).unwrap_err().to_string().contains("shoesize"));

        let doc = "law = exponential(1)\n";
        assert!(parse_config(doc).unwrap_err().to_string().contains("section"));

        assert!(parse_config("# nothing\n").is_err());
    }

    #[test]
    fn validation_errors_surface_with_the_section_id() {
        let doc = "[bad]\nlaw = exponential(1)\nweights = chisq(7)\nmethod = II\nn = 20\n";
        let err = parse_config(doc).unwrap_err();
        assert!(err.to_string().contains("bad"), "{err}");
        assert!(err.to_string().contains("symmetric"), "{err}");
    }
}
