//! Integer-binned empirical distributions.

use alloc::collections::BTreeMap;

use crate::error::{Error, Result};

/// A histogram bin label. `None` collects observations that have no value,
/// e.g. a starting edge density of a curve that never leaves zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bin {
    /// Lower edge of a bin of width `bin_width`.
    Value(u64),
    None,
}

impl From<Option<u64>> for Bin {
    fn from(v: Option<u64>) -> Self {
        v.map_or(Bin::None, Bin::Value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bin_width: u64,
    bins: BTreeMap<Bin, u64>,
    total: u64,
}

impl Default for Histogram {
    fn default() -> Self {
        Self {
            bin_width: 1,
            bins: BTreeMap::new(),
            total: 0,
        }
    }
}

impl Histogram {
    pub fn new(bin_width: u64) -> Result<Self> {
        if bin_width == 0 {
            return Err(Error::Contract("bin width must be positive".into()));
        }
        Ok(Self {
            bin_width,
            ..Self::default()
        })
    }

    pub fn from_observations<I>(bin_width: u64, observations: I) -> Result<Self>
    where
        I: IntoIterator<Item = Option<u64>>,
    {
        let mut h = Self::new(bin_width)?;
        for obs in observations {
            h.record(obs);
        }
        Ok(h)
    }

    /// Rebuilds a histogram from explicit `(bin, count)` pairs.
    pub fn from_counts<I>(bin_width: u64, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Bin, u64)>,
    {
        let mut h = Self::new(bin_width)?;
        for (bin, count) in counts {
            if let Bin::Value(label) = bin {
                if label % bin_width != 0 {
                    return Err(Error::Contract(alloc::format!(
                        "bin label {label} is not a multiple of width {bin_width}"
                    )));
                }
            }
            if count > 0 {
                *h.bins.entry(bin).or_insert(0) += count;
                h.total += count;
            }
        }
        Ok(h)
    }

    pub fn bin_of(&self, observation: Option<u64>) -> Bin {
        match observation {
            Some(v) => Bin::Value(v / self.bin_width * self.bin_width),
            None => Bin::None,
        }
    }

    pub fn record(&mut self, observation: Option<u64>) {
        let bin = self.bin_of(observation);
        *self.bins.entry(bin).or_insert(0) += 1;
        self.total += 1;
    }

    /// Adds the counts of `other`, which must share the bin width.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if other.bin_width != self.bin_width {
            return Err(Error::Contract(alloc::format!(
                "cannot merge bin widths {} and {}",
                self.bin_width,
                other.bin_width
            )));
        }
        for (&bin, &count) in &other.bins {
            *self.bins.entry(bin).or_insert(0) += count;
        }
        self.total += other.total;
        Ok(())
    }

    pub fn bin_width(&self) -> u64 {
        self.bin_width
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of bins with a nonzero count.
    pub fn occupied(&self) -> usize {
        self.bins.len()
    }

    pub fn count(&self, bin: Bin) -> u64 {
        self.bins.get(&bin).copied().unwrap_or(0)
    }

    /// Occupied bins in label order, `None` last.
    pub fn counts(&self) -> impl Iterator<Item = (Bin, u64)> + '_ {
        self.bins.iter().map(|(&b, &c)| (b, c))
    }

    pub fn probability(&self, bin: Bin) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(bin) as f64 / self.total as f64
        }
    }

    pub fn probabilities(&self) -> impl Iterator<Item = (Bin, f64)> + '_ {
        let total = self.total as f64;
        self.bins.iter().map(move |(&b, &c)| (b, c as f64 / total))
    }
}
