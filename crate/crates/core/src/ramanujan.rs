//! Ramanujan primes R_n and their prime indices s (R_n = p_s).
//!
//! `rho(x) = pi(x) - pi(floor(x/2))` counts the primes in (x/2, x]. R_n is
//! one past the largest x with rho(x) < n; since rho moves by at most one per
//! step, that x has rho(x) = n - 1 exactly, so a single ascending scan that
//! remembers the last x for every value of rho finds all R_n at once.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::sieve::{self, PrimeTable, DEFAULT_MEMORY_BUDGET};

const CACHE_MAGIC: &str = "# ramanujan-table v1";
const STEP_SAMPLES: usize = 10_000;
const STEP_SEED: u64 = 0x5eed_2a4a_4e77;

/// Primes in (x/2, x].
pub fn rho(t: &PrimeTable, x: u64) -> Result<u64> {
    Ok(t.prime_count(x)? - t.prime_count(x / 2)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    /// R_n.
    pub r: u64,
    /// Index of R_n among the primes.
    pub s: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamanujanTable {
    entries: Vec<Entry>,
    scan_bound: u64,
}

impl RamanujanTable {
    /// Assemble a table from rows for n = 1..=len, checking only what can be
    /// checked without a sieve (monotonicity and the scan bound).
    pub fn from_entries(entries: Vec<Entry>, scan_bound: u64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::CorruptCache("table has no rows".into()));
        }
        for (i, w) in entries.windows(2).enumerate() {
            if w[1].r <= w[0].r || w[1].s <= w[0].s {
                return Err(Error::CorruptCache(format!(
                    "rows {} and {} are not strictly increasing",
                    i + 1,
                    i + 2
                )));
            }
        }
        let last = entries[entries.len() - 1];
        if last.r > scan_bound {
            return Err(Error::CorruptCache(format!(
                "R_{} = {} exceeds scan bound {scan_bound}",
                entries.len(),
                last.r
            )));
        }
        Ok(Self {
            entries,
            scan_bound,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn scan_bound(&self) -> u64 {
        self.scan_bound
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn entry(&self, n: u64) -> Result<Entry> {
        if n == 0 || n > self.n_max() {
            return Err(Error::OutOfRange {
                what: "n",
                value: n,
                max: self.n_max(),
            });
        }
        Ok(self.entries[(n - 1) as usize])
    }

    /// R_n.
    pub fn ramanujan(&self, n: u64) -> Result<u64> {
        Ok(self.entry(n)?.r)
    }

    /// s with R_n = p_s.
    pub fn index_s(&self, n: u64) -> Result<u64> {
        Ok(self.entry(n)?.s)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = String::with_capacity(self.entries.len() * 24 + 64);
        let _ = writeln!(
            buf,
            "{CACHE_MAGIC} n_max={} scan_bound={}",
            self.n_max(),
            self.scan_bound
        );
        buf.push_str("n,r,s\n");
        for (i, e) in self.entries.iter().enumerate() {
            let _ = writeln!(buf, "{},{},{}", i + 1, e.r, e.s);
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let corrupt = |m: String| Error::CorruptCache(m);
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| corrupt("empty file".into()))??;
        let (n_max, scan_bound) = parse_header(&header)?;
        match lines.next() {
            Some(Ok(l)) if l == "n,r,s" => {}
            _ => return Err(corrupt("missing `n,r,s` column header".into())),
        }
        let mut entries = Vec::with_capacity(n_max.min(1 << 24) as usize);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let lineno = i + 3;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(corrupt(format!("line {lineno}: expected 3 fields")));
            }
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| corrupt(format!("line {lineno}: bad integer `{s}`")))
            };
            let (n, r, s) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
            if n != entries.len() as u64 + 1 {
                return Err(corrupt(format!(
                    "line {lineno}: expected n = {}, found {n}",
                    entries.len() + 1
                )));
            }
            entries.push(Entry { r, s });
        }
        if entries.len() as u64 != n_max {
            return Err(corrupt(format!(
                "header says n_max={n_max} but file has {} rows",
                entries.len()
            )));
        }
        Self::from_entries(entries, scan_bound)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_csv(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(f))
    }
}

fn parse_header(line: &str) -> Result<(u64, u64)> {
    let bad = || Error::CorruptCache(format!("malformed header `{line}`"));
    let rest = line.strip_prefix(CACHE_MAGIC).ok_or_else(bad)?;
    let mut parts = rest.split_whitespace();
    let n_max = parts
        .next()
        .and_then(|p| p.strip_prefix("n_max="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(bad)?;
    let scan_bound = parts
        .next()
        .and_then(|p| p.strip_prefix("scan_bound="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((n_max, scan_bound))
}

/// Build R_1..R_{n_max} under the default memory budget.
pub fn build_table(n_max: u64) -> Result<RamanujanTable> {
    Ok(build_table_with_sieve(n_max, DEFAULT_MEMORY_BUDGET)?.0)
}

/// Build the table and return the sieve alongside it. The sieve holds at
/// least 4 n_max primes, enough for every classical bound check on the table.
pub fn build_table_with_sieve(
    n_max: u64,
    budget_bytes: u64,
) -> Result<(RamanujanTable, PrimeTable)> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let last_bytes = n_max.saturating_mul(8);
    if last_bytes > budget_bytes {
        return Err(Error::ResourceLimit(format!(
            "n_max = {n_max} needs {last_bytes} bytes of scan state, budget is {budget_bytes}"
        )));
    }
    let k = n_max
        .checked_mul(4)
        .ok_or_else(|| Error::ResourceLimit(format!("n_max = {n_max} is too large")))?;
    // Quick refusal before allocating anything: p_k > k log k.
    let kf = k as f64;
    if kf > 3.0 && sieve::sieve_bytes((kf * kf.ln()) as u64) > budget_bytes {
        return Err(Error::ResourceLimit(format!(
            "sieving past p_{k} exceeds the {budget_bytes}-byte budget"
        )));
    }
    let primes = sieve::sieve_for_nth_prime(k, budget_bytes)?;
    // R_n < p_{4n} for every n.
    let scan_bound = primes.nth_prime(k)?;
    let table = scan(&primes, n_max, scan_bound)?;
    validate(&table, &primes)?;
    Ok((table, primes))
}

fn scan(primes: &PrimeTable, n_max: u64, bound: u64) -> Result<RamanujanTable> {
    let mut rng = StdRng::seed_from_u64(STEP_SEED);
    let mut probes: Vec<u64> = (0..STEP_SAMPLES)
        .map(|_| rng.gen_range(2..=bound))
        .collect();
    probes.sort_unstable();
    probes.dedup();
    let mut probes = probes.into_iter().peekable();

    let cap = n_max as usize;
    // last[v] = largest x seen with rho(x) = v; 0 marks "never".
    let mut last = vec![0u64; cap];
    last[0] = 1;
    let mut r: u64 = 0;
    for x in 2..=bound {
        if primes.is_prime_unchecked(x) {
            r += 1;
        }
        if x % 2 == 0 && primes.is_prime_unchecked(x / 2) {
            r -= 1;
        }
        if (r as usize) < cap {
            last[r as usize] = x;
        }
        if probes.peek() == Some(&x) {
            probes.next();
            let direct = rho(primes, x)?;
            if direct != r {
                return Err(Error::Internal(format!(
                    "incremental rho({x}) = {r} but pi differencing gives {direct}"
                )));
            }
        }
    }
    if r < n_max {
        return Err(Error::Internal(format!(
            "rho({bound}) = {r} < n_max = {n_max}; scan bound too small"
        )));
    }

    let mut entries = Vec::with_capacity(cap);
    for (v, &x) in last.iter().enumerate() {
        if x == 0 {
            return Err(Error::Internal(format!("rho never took the value {v}")));
        }
        let rn = x + 1;
        entries.push(Entry {
            r: rn,
            s: primes.prime_count(rn)?,
        });
    }
    RamanujanTable::from_entries(entries, bound)
        .map_err(|e| Error::Internal(format!("scan produced a bad table: {e}")))
}

/// Check every row against the sieve: R_n prime, rho(R_n) = n,
/// rho(R_n - 1) = n - 1 and pi(R_n) = s.
pub fn validate(tab: &RamanujanTable, primes: &PrimeTable) -> Result<()> {
    for (i, e) in tab.entries().iter().enumerate() {
        let n = i as u64 + 1;
        let bad = |what: &str| Error::Internal(format!("R_{n} = {}: {what}", e.r));
        if !primes.is_prime(e.r)? {
            return Err(bad("not prime"));
        }
        if rho(primes, e.r)? != n {
            return Err(bad("rho(R_n) != n"));
        }
        if rho(primes, e.r - 1)? != n - 1 {
            return Err(bad("rho(R_n - 1) != n - 1"));
        }
        if primes.prime_count(e.r)? != e.s {
            return Err(bad("pi(R_n) != s"));
        }
    }
    if rho(primes, tab.scan_bound())? < tab.n_max() {
        return Err(Error::Internal("rho(scan_bound) < n_max".into()));
    }
    Ok(())
}
