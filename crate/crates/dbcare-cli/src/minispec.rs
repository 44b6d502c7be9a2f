//! Inline mini-spec grammar for single runs and bound tabulation.
//!
//! A spec is `name` or `name:item,item,...` where an item is either
//! `key=value` or a bare value consumed positionally. Unknown or leftover
//! keys are rejected so typos fail loudly instead of silently using a
//! default.

use dbcare::core::BanditInstance;
use dbcare::harness::{drug_binary, drug_leveled, PolicyConfig};
use dbcare::policies::{Parameterization, RiskKind};

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

struct SpecArgs {
    name: String,
    positional: Vec<String>,
    keyed: Vec<(String, String)>,
}

impl SpecArgs {
    fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        if text.is_empty() {
            return Err("empty spec".to_string());
        }
        let (name, tail) = match text.split_once(':') {
            Some((name, tail)) => (name, Some(tail)),
            None => (text, None),
        };
        if name.is_empty() {
            return Err(format!("spec '{text}' has an empty name"));
        }
        let mut positional = Vec::new();
        let mut keyed = Vec::new();
        if let Some(tail) = tail {
            for item in tail.split(',') {
                let item = item.trim();
                if item.is_empty() {
                    return Err(format!("spec '{text}' has an empty item"));
                }
                match item.split_once('=') {
                    Some((key, value)) => {
                        if key.is_empty() || value.is_empty() {
                            return Err(format!("malformed item '{item}' in spec '{text}'"));
                        }
                        keyed.push((key.to_string(), value.to_string()));
                    }
                    None => positional.push(item.to_string()),
                }
            }
        }
        Ok(SpecArgs {
            name: name.to_string(),
            positional,
            keyed,
        })
    }

    fn take_key(&mut self, key: &str) -> Option<String> {
        let index = self.keyed.iter().position(|(k, _)| k == key)?;
        Some(self.keyed.remove(index).1)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, String> {
        match self.take_key(key) {
            Some(raw) => raw
                .parse::<f64>()
                .map(Some)
                .map_err(|_| format!("{}: '{raw}' is not a number for {key}", self.name)),
            None => Ok(None),
        }
    }

    fn take_u64(&mut self, key: &str) -> Result<Option<u64>, String> {
        match self.take_key(key) {
            Some(raw) => raw
                .parse::<u64>()
                .map(Some)
                .map_err(|_| format!("{}: '{raw}' is not a count for {key}", self.name)),
            None => Ok(None),
        }
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>, String> {
        Ok(self.take_u64(key)?.map(|v| v as usize))
    }

    fn require_f64(&mut self, key: &str) -> Result<f64, String> {
        self.take_f64(key)?
            .ok_or_else(|| format!("{} needs {key}=<number>", self.name))
    }

    fn take_positional(&mut self) -> Option<String> {
        if self.positional.is_empty() {
            None
        } else {
            Some(self.positional.remove(0))
        }
    }

    fn finish(self) -> Result<(), String> {
        if let Some(p) = self.positional.first() {
            return Err(format!("{}: unexpected value '{p}'", self.name));
        }
        if let Some((k, _)) = self.keyed.first() {
            return Err(format!("{}: unknown key '{k}'", self.name));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

/// An instance parsed from an inline spec. `bounded` records whether the
/// reward range is intrinsic to the family (Bernoulli and drug outcomes)
/// rather than a convention that the caller should confirm via --B.
pub struct ParsedInstance {
    pub instance: BanditInstance,
    pub bounded: bool,
}

/// Parse instance specs such as `gaussian2:delta=1`, `one_sparse:K=5,delta=0.5`,
/// or `drug_binary`.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, String> {
    let mut args = SpecArgs::parse(text)?;
    let build = |res: dbcare::Result<BanditInstance>| res.map_err(|e| e.to_string());
    let (instance, bounded) = match args.name.as_str() {
        "gaussian2" => {
            let delta = args.require_f64("delta")?;
            let sigma = args.take_f64("sigma")?.unwrap_or(1.0);
            (
                build(BanditInstance::gaussian_two_arm(delta, sigma))?,
                false,
            )
        }
        "bernoulli2" => {
            let delta = args.require_f64("delta")?;
            (build(BanditInstance::bernoulli_two_arm(delta))?, true)
        }
        "one_sparse" => {
            let k = take_arm_count(&mut args)?;
            let delta = args.require_f64("delta")?;
            let sigma = args.take_f64("sigma")?.unwrap_or(1.0);
            (build(BanditInstance::one_sparse(k, delta, sigma))?, false)
        }
        "linear_decay" => {
            let k = take_arm_count(&mut args)?;
            let delta2 = args.require_f64("delta2")?;
            let sigma = args.take_f64("sigma")?.unwrap_or(1.0);
            (
                build(BanditInstance::linear_decay(k, delta2, sigma))?,
                false,
            )
        }
        "drug_binary" => (drug_binary(), true),
        "drug_leveled" => (drug_leveled(), true),
        other => {
            return Err(format!(
                "unknown instance family '{other}'; expected gaussian2, bernoulli2, \
                 one_sparse, linear_decay, drug_binary, or drug_leveled"
            ))
        }
    };
    args.finish()?;
    Ok(ParsedInstance { instance, bounded })
}

fn take_arm_count(args: &mut SpecArgs) -> Result<usize, String> {
    if let Some(k) = args.take_usize("K")? {
        return Ok(k);
    }
    args.take_usize("k")?
        .ok_or_else(|| format!("{} needs K=<arms>", args.name))
}

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

/// Parse policy specs such as `dbcare:mi`, `oracle:sr`, `sh:T=500`,
/// `racing:delta=0.1`, or `guess`. A bare risk token for dbcare and the
/// oracle defaults to `default_risk` when omitted.
pub fn parse_policy(text: &str, default_risk: RiskKind) -> Result<PolicyConfig, String> {
    let mut args = SpecArgs::parse(text)?;
    let config = match args.name.as_str() {
        "guess" => PolicyConfig::Guess,
        "dbcare" => {
            let risk = take_risk(&mut args, default_risk)?;
            let parameterization = match args.take_key("param") {
                Some(raw) => Some(parse_parameterization(&raw)?),
                None => None,
            };
            PolicyConfig::Dbcare {
                risk,
                parameterization,
            }
        }
        "oracle" => PolicyConfig::Oracle {
            risk: take_risk(&mut args, default_risk)?,
        },
        "sh" | "sequential_halving" => PolicyConfig::SequentialHalving {
            budget: args.take_u64("T")?,
            budget_per_arm: args.take_u64("per_arm")?,
        },
        "racing" => PolicyConfig::Racing {
            delta: args.require_f64("delta")?,
            safeguard_cap: args.take_u64("cap")?,
        },
        other => {
            return Err(format!(
                "unknown policy '{other}'; expected dbcare, oracle, sh, racing, or guess"
            ))
        }
    };
    args.finish()?;
    Ok(config)
}

fn take_risk(args: &mut SpecArgs, default_risk: RiskKind) -> Result<RiskKind, String> {
    match args.take_positional() {
        Some(token) => match token.as_str() {
            "mi" => Ok(RiskKind::Mi),
            "sr" => Ok(RiskKind::Sr),
            other => Err(format!("{}: unknown risk '{other}'", args.name)),
        },
        None => Ok(default_risk),
    }
}

fn parse_parameterization(raw: &str) -> Result<Parameterization, String> {
    match raw {
        "two_arm" => Ok(Parameterization::TwoArm),
        "k_arm" => Ok(Parameterization::KArm),
        other => Err(format!(
            "unknown parameterization '{other}'; expected two_arm or k_arm"
        )),
    }
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Parse a grid spec: either comma-separated values (`0.1,0.5,1`) or a
/// range `lo:hi:points` with an optional trailing `:log`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty grid spec".to_string());
    }
    if text.contains(',') {
        return text
            .split(',')
            .map(|item| {
                item.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("'{item}' is not a number"))
            })
            .collect();
    }
    let parts: Vec<&str> = text.split(':').collect();
    let (lo, hi, points, log) = match parts.as_slice() {
        [single] => {
            return single
                .parse::<f64>()
                .map(|v| vec![v])
                .map_err(|_| format!("'{single}' is not a number"));
        }
        [lo, hi, points] => (lo, hi, points, false),
        [lo, hi, points, scale] => match *scale {
            "log" => (lo, hi, points, true),
            "lin" => (lo, hi, points, false),
            other => return Err(format!("unknown grid scale '{other}'; expected log or lin")),
        },
        _ => {
            return Err(format!(
                "grid '{text}' should be lo:hi:points[:log] or comma-separated values"
            ))
        }
    };
    let lo: f64 = lo.parse().map_err(|_| format!("'{lo}' is not a number"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("'{hi}' is not a number"))?;
    let points: usize = points
        .parse()
        .map_err(|_| format!("'{points}' is not a point count"))?;
    if points == 0 {
        return Err("grid needs at least one point".to_string());
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(format!("grid range [{lo}, {hi}] is not ordered"));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    if log {
        if lo <= 0.0 || lo.is_nan() {
            return Err("log grids need positive endpoints".to_string());
        }
        let (llo, lhi) = (lo.ln(), hi.ln());
        Ok((0..points)
            .map(|i| (llo + (lhi - llo) * i as f64 / (points - 1) as f64).exp())
            .collect())
    } else {
        Ok((0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect())
    }
}
