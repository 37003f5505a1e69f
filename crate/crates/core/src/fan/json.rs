use serde::{Deserialize, Serialize};

use super::{Fan, FanError, FanOptions};

/// On-disk fan description. Rays are rows; cones index into them; the zero
/// cone is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn parse(text: &str) -> Result<Self, FanError> {
        serde_json::from_str(text).map_err(|e| FanError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn build(self, options: FanOptions) -> Result<Fan, FanError> {
        let fan = Fan::with_options(self.rank, self.rays, self.maximal_cones, options)?;
        Ok(match self.name {
            Some(n) => fan.with_name(n),
            None => fan,
        })
    }

    /// Canonical text: one ray or cone per line, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        let list = |rows: Vec<String>| {
            if rows.is_empty() {
                "[]".to_string()
            } else {
                format!("[\n    {}\n  ]", rows.join(",\n    "))
            }
        };
        let ints = |v: &[String]| format!("[{}]", v.join(", "));
        let rays = list(self.rays.iter().map(|r| ints(&r.iter().map(i64::to_string).collect::<Vec<_>>())).collect());
        let cones = list(
            self.maximal_cones
                .iter()
                .map(|c| ints(&c.iter().map(usize::to_string).collect::<Vec<_>>()))
                .collect(),
        );
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            out += &format!("  \"name\": {},\n", serde_json::Value::String(name.clone()));
        }
        out += &format!("  \"rank\": {},\n  \"rays\": {rays},\n  \"maximal_cones\": {cones}\n}}\n", self.rank);
        out
    }
}

impl From<&Fan> for FanFile {
    fn from(fan: &Fan) -> Self {
        Self {
            name: fan.name().map(str::to_string),
            rank: fan.rank(),
            rays: fan.rays().to_vec(),
            maximal_cones: fan.maximal_ray_sets(),
        }
    }
}

impl Fan {
    pub fn read_json(text: &str) -> Result<Self, FanError> {
        FanFile::parse(text)?.build(FanOptions::default())
    }

    pub fn read_json_with(text: &str, options: FanOptions) -> Result<Self, FanError> {
        FanFile::parse(text)?.build(options)
    }

    pub fn write_json(&self) -> String {
        FanFile::from(self).to_json()
    }
}
