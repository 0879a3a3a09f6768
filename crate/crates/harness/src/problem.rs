//! Problem specification strings such as `quadmm:n=20,omega=0,seed=1`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use flexkit::problems::{parse_libsvm, logistic_instance, BilinearGame, CournotNash, QuadraticMinimax};
use flexkit::{Instance64, Point64};

/// `λ` for logistic regression: absolute, or `c/m` with `m` the sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Absolute(f64),
    PerSample(f64),
}

impl Lambda {
    pub fn resolve(&self, samples: usize) -> f64 {
        match *self {
            Lambda::Absolute(v) => v,
            Lambda::PerSample(c) => c / samples as f64,
        }
    }
}

impl FromStr for Lambda {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| t.trim().parse::<f64>().with_context(|| format!("invalid lambda `{s}`"));
        let v = match s.strip_suffix("/m") {
            Some(c) => Lambda::PerSample(parse(c)?),
            None => Lambda::Absolute(parse(s)?),
        };
        let raw = match v {
            Lambda::Absolute(x) | Lambda::PerSample(x) => x,
        };
        if !(raw >= 0.0 && raw.is_finite()) {
            bail!("lambda must be nonnegative, got `{s}`");
        }
        Ok(v)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Absolute(v) => write!(f, "{v}"),
            Lambda::PerSample(c) => write!(f, "{c}/m"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    QuadMinimax { n: usize, omega: f64, seed: Option<u64> },
    Bilinear { n: usize, seed: Option<u64> },
    Cournot { n: usize, seed: Option<u64> },
    Logistic { path: PathBuf, lambda: Lambda },
}

/// A generated instance and the point the solvers start from.
pub struct BuiltProblem {
    pub label: String,
    pub instance: Instance64,
    pub start: Point64,
}

impl ProblemSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemSpec::QuadMinimax { .. } => "quadmm",
            ProblemSpec::Bilinear { .. } => "bilinear",
            ProblemSpec::Cournot { .. } => "cournot",
            ProblemSpec::Logistic { .. } => "logistic",
        }
    }

    /// Fills a missing seed.
    pub fn with_default_seed(mut self, fallback: u64) -> Self {
        match &mut self {
            ProblemSpec::QuadMinimax { seed, .. } | ProblemSpec::Bilinear { seed, .. } | ProblemSpec::Cournot { seed, .. } => {
                seed.get_or_insert(fallback);
            }
            ProblemSpec::Logistic { .. } => {}
        }
        self
    }

    /// File-name friendly form of the spec.
    pub fn slug(&self) -> String {
        self.to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
            .collect()
    }

    pub fn is_logistic(&self) -> bool {
        matches!(self, ProblemSpec::Logistic { .. })
    }

    /// Builds the instance. Start points: the origin, except the barycenter of
    /// each simplex for the bilinear game.
    pub fn build(&self) -> Result<BuiltProblem> {
        let label = self.to_string();
        let seed = |s: &Option<u64>| s.unwrap_or(0);
        let (instance, start) = match self {
            ProblemSpec::QuadMinimax { n, omega, seed: s } => {
                let inst = QuadraticMinimax::generate(*n, *omega, seed(s))?.instance()?;
                let start = Point64::zeros(2 * n);
                (inst, start)
            }
            ProblemSpec::Bilinear { n, seed: s } => {
                let inst = BilinearGame::generate(*n, seed(s))?.instance()?;
                let start = Point64::new(vec![1.0 / *n as f64; 2 * n])?;
                (inst, start)
            }
            ProblemSpec::Cournot { n, seed: s } => (CournotNash::generate(*n, seed(s))?.instance()?, Point64::zeros(*n)),
            ProblemSpec::Logistic { path, lambda } => {
                let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                let data = parse_libsvm(&bytes, None).with_context(|| format!("parsing {}", path.display()))?;
                let inst = logistic_instance(&data, lambda.resolve(data.samples), &label)?;
                let start = Point64::zeros(data.features);
                (inst, start)
            }
        };
        Ok(BuiltProblem { label, instance, start })
    }
}

fn parse_pairs(body: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| anyhow!("expected key=value, got `{item}`"))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            bail!("duplicate key `{}`", k.trim());
        }
    }
    Ok(out)
}

fn take<T: FromStr>(kv: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    kv.remove(key)
        .map(|v| v.parse::<T>().map_err(|e| anyhow!("invalid value `{v}` for `{key}`: {e}")))
        .transpose()
}

fn require<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("missing `{key}`"))
}

impl FromStr for ProblemSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = parse_pairs(body)?;
        let spec = match kind.trim() {
            "quadmm" => ProblemSpec::QuadMinimax {
                n: require(take(&mut kv, "n")?, "n")?,
                omega: take(&mut kv, "omega")?.unwrap_or(0.0),
                seed: take(&mut kv, "seed")?,
            },
            "bilinear" => ProblemSpec::Bilinear { n: require(take(&mut kv, "n")?, "n")?, seed: take(&mut kv, "seed")? },
            "cournot" => ProblemSpec::Cournot { n: require(take(&mut kv, "n")?, "n")?, seed: take(&mut kv, "seed")? },
            "logistic" => ProblemSpec::Logistic {
                path: PathBuf::from(require(kv.remove("path"), "path")?),
                lambda: take::<Lambda>(&mut kv, "lambda")?.unwrap_or(Lambda::PerSample(1.0)),
            },
            other => bail!("unknown problem kind `{other}` (expected quadmm, bilinear, cournot or logistic)"),
        };
        if let Some(k) = kv.keys().next() {
            bail!("unknown key `{k}` for problem kind `{}`", spec.kind());
        }
        if let ProblemSpec::QuadMinimax { n: 0, .. } | ProblemSpec::Bilinear { n: 0, .. } | ProblemSpec::Cournot { n: 0, .. } = spec {
            bail!("n must be at least 1");
        }
        Ok(spec)
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seed = |s: &Option<u64>| s.map(|v| format!(",seed={v}")).unwrap_or_default();
        match self {
            ProblemSpec::QuadMinimax { n, omega, seed: s } => write!(f, "quadmm:n={n},omega={omega}{}", seed(s)),
            ProblemSpec::Bilinear { n, seed: s } => write!(f, "bilinear:n={n}{}", seed(s)),
            ProblemSpec::Cournot { n, seed: s } => write!(f, "cournot:n={n}{}", seed(s)),
            ProblemSpec::Logistic { path, lambda } => write!(f, "logistic:path={},lambda={lambda}", path.display()),
        }
    }
}
