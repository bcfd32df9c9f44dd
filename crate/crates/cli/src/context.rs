//! Metric selection from flags and curve-file metadata.

use clap::Args;
use shrinker_core::foliation::FoliationType;
use shrinker_core::geodesics::ShrinkerContext;
use shrinker_core::io::CurveFile;

use crate::output::Failure;

#[derive(Debug, Clone, Default, Args)]
pub struct MetricArgs {
    /// Rotational reduction (Angenent metric) in dimension `--n`.
    #[arg(long, conflicts_with = "isoparametric")]
    pub rotational: bool,
    /// Isoparametric reduction of type (`--g`, `--m`).
    #[arg(long)]
    pub isoparametric: bool,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub g: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    /// Accept g outside {1, 2, 3, 4, 6}.
    #[arg(long)]
    pub allow_any_g: bool,
}

pub fn foliation(g: u32, m: u32, allow_any_g: bool) -> Result<FoliationType, Failure> {
    let t = if allow_any_g {
        FoliationType::with_any_g(g, m)
    } else {
        FoliationType::new(g, m)
    };
    t.map_err(|e| Failure::usage(e.to_string()))
}

fn parse_meta(file: &CurveFile, key: &str) -> Result<Option<u32>, Failure> {
    file.get(key)
        .map(|s| s.parse::<u32>().map_err(|_| Failure::usage(format!("metadata {key}={s} is not a positive integer"))))
        .transpose()
}

impl MetricArgs {
    fn is_empty(&self) -> bool {
        !self.rotational && !self.isoparametric && self.n.is_none() && self.g.is_none() && self.m.is_none()
    }

    /// The context named by the flags, falling back to the file's metadata.
    /// `None` if neither names one.
    pub fn resolve(&self, file: Option<&CurveFile>) -> Result<Option<ShrinkerContext>, Failure> {
        if !self.is_empty() {
            return self.context_from(self.rotational, self.isoparametric, self.n, self.g, self.m).map(Some);
        }
        let Some(file) = file else { return Ok(None) };
        let (n, g, m) = (parse_meta(file, "n")?, parse_meta(file, "g")?, parse_meta(file, "m")?);
        let (rot, iso) = match file.get("kind") {
            Some("rotational") => (true, false),
            Some("isoparametric") => (false, true),
            Some(other) => return Err(Failure::usage(format!("unknown metadata kind={other}"))),
            None => (false, false),
        };
        if !rot && !iso && n.is_none() && g.is_none() && m.is_none() {
            return Ok(None);
        }
        self.context_from(rot, iso, n, g, m).map(Some)
    }

    pub fn require(&self, file: Option<&CurveFile>) -> Result<ShrinkerContext, Failure> {
        self.resolve(file)?.ok_or_else(|| {
            Failure::usage("no metric given: pass --rotational --n N or --isoparametric --g G --m M")
        })
    }

    fn context_from(
        &self,
        rot: bool,
        iso: bool,
        n: Option<u32>,
        g: Option<u32>,
        m: Option<u32>,
    ) -> Result<ShrinkerContext, Failure> {
        if iso || (!rot && (g.is_some() || m.is_some())) {
            if rot {
                return Err(Failure::usage("--rotational conflicts with --g/--m"));
            }
            let (Some(g), Some(m)) = (g, m) else {
                return Err(Failure::usage("isoparametric metric needs both --g and --m"));
            };
            let t = foliation(g, m, self.allow_any_g)?;
            if let Some(n) = n {
                if n != t.n() {
                    return Err(Failure::usage(format!("n = {n} disagrees with {t}, which has n = {}", t.n())));
                }
            }
            return Ok(ShrinkerContext::Isoparametric(t));
        }
        if g.is_some() || m.is_some() {
            return Err(Failure::usage("--rotational conflicts with --g/--m"));
        }
        let n = n.ok_or_else(|| Failure::usage("rotational metric needs --n"))?;
        Ok(ShrinkerContext::rotational(n)?)
    }
}

/// Axis names of the parameter plane.
pub fn axis_names(ctx: Option<ShrinkerContext>) -> (&'static str, &'static str) {
    match ctx {
        Some(ShrinkerContext::Rotational { .. }) => ("x", "r"),
        Some(ShrinkerContext::Isoparametric(_)) => ("r", "φ"),
        None => ("u", "v"),
    }
}

/// `#key=value` metadata identifying `ctx` in a curve file.
pub fn metadata(ctx: ShrinkerContext, closed: bool) -> Vec<(&'static str, String)> {
    let mut meta = match ctx {
        ShrinkerContext::Rotational { n } => vec![("kind", "rotational".to_string()), ("n", n.to_string())],
        ShrinkerContext::Isoparametric(t) => vec![
            ("kind", "isoparametric".to_string()),
            ("n", t.n().to_string()),
            ("g", t.g().to_string()),
            ("m", t.m().to_string()),
        ],
    };
    meta.push(("closed", closed.to_string()));
    meta
}
