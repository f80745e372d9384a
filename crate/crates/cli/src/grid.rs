use std::str::FromStr;

/// `start:stop:count[:log]`, evenly spaced in value or in logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let (j, k) = ((n - k as f64), k as f64);
                if self.log {
                    (self.start.ln() * j + self.stop.ln() * k) / n
                } else {
                    (self.start * j + self.stop * k) / n
                }
            })
            .enumerate()
            .map(|(k, v)| match k {
                0 => self.start,
                k if k + 1 == self.count => self.stop,
                _ if self.log => v.exp(),
                _ => v,
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("expected start:stop:count[:log], got '{s}'"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("'{p}' is not a number"));
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("'{}' is not a point count", parts[2]))?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(other) => return Err(format!("unknown spacing '{other}'")),
        };
        if count == 0 {
            return Err("grid is empty".into());
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err("grid ends must be finite".into());
        }
        if count > 1 && !(start < stop) {
            return Err("grid must be strictly increasing".into());
        }
        if log && !(start > 0.0) {
            return Err("log grid needs a positive start".into());
        }
        Ok(Grid { start, stop, count, log })
    }
}
