use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feature switches of the RST-Recursive model. Tree traversal (T) is
/// always on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AblationConfig {
    /// Nuclearity embeddings.
    pub ns: bool,
    /// Relation embeddings (keyed by relation and nuclearity together).
    pub r: bool,
    /// EDU embeddings at the leaves.
    pub e: bool,
}

impl AblationConfig {
    pub const T: AblationConfig = AblationConfig { ns: false, r: false, e: false };
    pub const T_NS: AblationConfig = AblationConfig { ns: true, r: false, e: false };
    pub const T_NS_R: AblationConfig = AblationConfig { ns: true, r: true, e: false };
    pub const FULL: AblationConfig = AblationConfig { ns: true, r: true, e: true };

    pub fn new(ns: bool, r: bool, e: bool) -> Result<Self> {
        if r && !ns {
            return Err(Error::Config(
                "relation embeddings require nuclearity (features r without ns)".into(),
            ));
        }
        Ok(Self { ns, r, e })
    }
}

impl fmt::Display for AblationConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("t")?;
        for (on, name) in [(self.ns, "ns"), (self.r, "r"), (self.e, "e")] {
            if on {
                write!(f, ",{name}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for AblationConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut t, mut ns, mut r, mut e) = (false, false, false, false);
        for flag in s.split(',').map(str::trim) {
            let slot = match flag.to_ascii_lowercase().as_str() {
                "t" => &mut t,
                "ns" => &mut ns,
                "r" => &mut r,
                "e" => &mut e,
                other => return Err(Error::Config(format!("unknown feature `{other}`"))),
            };
            if *slot {
                return Err(Error::Config(format!("feature `{flag}` given twice")));
            }
            *slot = true;
        }
        if !t {
            return Err(Error::Config("feature list must include `t`".into()));
        }
        Self::new(ns, r, e)
    }
}

impl TryFrom<String> for AblationConfig {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AblationConfig> for String {
    fn from(a: AblationConfig) -> String {
        a.to_string()
    }
}
