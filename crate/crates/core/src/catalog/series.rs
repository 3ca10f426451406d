//! Generators for the r-parameterized catalog rows. The stored text carries
//! each series at its default index; other indices are rebuilt here through
//! the same entry grammar, so both paths stay in one format.

use super::factorial;
use crate::error::{Error, Result};
use crate::parse::{parse_entry_body, EntrySpec};

/// Exponent multipliers for the constant-coefficient slots of rows 50/51.
const ETA_RATES: [i64; 6] = [1, -1, 2, -2, 3, -3];

pub fn series_text(label: &str, r: u32) -> Result<String> {
    let jet = |k: u32| format!("y^({k})");
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    match label {
        "48" => {
            if r < 3 {
                return Err(Error::Constraint("entry 48 needs r >= 3".into()));
            }
            line("series r min 3 default 3 max 6".to_string());
            line("labels N1=\"20\" N0=\"73,(2)\"".into());
            for i in 1..=r {
                line(format!("slot xi{i} default = x^{}", i + 1));
            }
            line("e1 = D[y]".into());
            line("e2 = x*D[y]".into());
            for i in 1..=r {
                line(format!("e{} = xi{i}*D[y]", i + 2));
            }
            let dds: Vec<String> = (1..=r).map(|i| format!("dd(xi{i},2)")).collect();
            line("invariant = x".into());
            line(format!("invariant = W(y'', {})", dds.join(", ")));
            line("iod = 1".into());
            line(format!("liedet = W({})", dds.join(", ")));
        }
        "49" => {
            if r < 2 {
                return Err(Error::Constraint("entry 49 needs r >= 2".into()));
            }
            line("series r min 2 default 2 max 6".to_string());
            line("labels N1=\"21\" N0=\"72,(8)\"".into());
            for i in 1..=r {
                line(format!("slot xi{i} default = x^{}", i + 1));
            }
            line("e1 = y*D[y]".into());
            line("e2 = D[y]".into());
            line("e3 = x*D[y]".into());
            for i in 1..=r {
                line(format!("e{} = xi{i}*D[y]", i + 3));
            }
            let dds: Vec<String> = (1..=r).map(|i| format!("dd(xi{i},2)")).collect();
            line("invariant = x".into());
            line(format!("invariant = dlog(W(y'', {}))", dds.join(", ")));
            line("iod = 1".into());
            line(format!("liedet = W(y'', {})", dds.join(", ")));
        }
        "50" => {
            if r < 4 {
                return Err(Error::Constraint("entry 50 needs r >= 4".into()));
            }
            line("series r min 4 default 4 max 6".to_string());
            line("labels N1=\"22\" N0=\"73,(1)\"".into());
            for i in 1..=r as usize {
                line(format!("slot eta{i} default = {}", eta_default(i)));
            }
            line("e1 = D[x]".into());
            for i in 1..=r {
                line(format!("e{} = eta{i}*D[y]", i + 1));
            }
            let etas: Vec<String> = (1..=r).map(|i| format!("eta{i}")).collect();
            line(format!("invariant = K({})", etas.join(", ")));
            line("iod = 1".into());
            line(format!("liedet = W({})", etas.join(", ")));
        }
        "51" => {
            if r < 3 {
                return Err(Error::Constraint("entry 51 needs r >= 3".into()));
            }
            line("series r min 3 default 3 max 6".to_string());
            line("labels N1=\"23\" N0=\"72,(7)\"".into());
            for i in 1..=r as usize {
                line(format!("slot eta{i} default = {}", eta_default(i)));
            }
            line("e1 = D[x]".into());
            line("e2 = y*D[y]".into());
            for i in 1..=r {
                line(format!("e{} = eta{i}*D[y]", i + 2));
            }
            let etas: Vec<String> = (1..=r).map(|i| format!("eta{i}")).collect();
            line(format!("invariant = dlog(K({}))", etas.join(", ")));
            line("iod = 1".into());
            line(format!("liedet = W(y, {})", etas.join(", ")));
        }
        "52" => {
            if r < 2 {
                return Err(Error::Constraint("entry 52 needs r >= 2".into()));
            }
            line("series r min 2 default 2 max 6".to_string());
            line("labels N1=\"24\" N0=\"72,(5)\"".into());
            line("param c free".into());
            line("e1 = D[x]".into());
            line("e2 = D[y]".into());
            line("e3 = x*D[x] + c*y*D[y]".into());
            for k in 1..=r {
                line(format!("e{} = x^{k}*D[y]", k + 3));
            }
            let r1 = r + 1;
            let r2 = r + 2;
            line("case c = r+1:".into());
            line(format!("samples c = {}", r1));
            line(format!("invariant = {}", jet(r1)));
            line(format!("invariant = {}*({})^(-2)", jet(r + 3), jet(r2)));
            line(format!("iod = ({})^(-1)", jet(r2)));
            line(format!("liedet = {}", jet(r2)));
            line("case c != r+1:".into());
            line("samples c = 0, 1/2, 2".into());
            line(format!("invariant = ({})^(({}-c)/(c-{}))*{}", jet(r1), r2, r1, jet(r2)));
            line(format!("iod = ({})^(1/(c-{}))", jet(r1), r1));
            line(format!("liedet = {}", jet(r1)));
        }
        "53" => {
            if r < 3 {
                return Err(Error::Constraint("entry 53 needs r >= 3".into()));
            }
            line("series r min 3 default 3 max 6".to_string());
            line("labels N1=\"25\" N0=\"72,(6)\"".into());
            line("e1 = D[x]".into());
            line("e2 = D[y]".into());
            for k in 1..=r - 1 {
                line(format!("e{} = x^{k}*D[y]", k + 2));
            }
            line(format!("e{} = x*D[x] + ({r}*y + x^{r})*D[y]", r + 2));
            let fact = factorial(r);
            line(format!("invariant = {}*exp((1/{})*{})", jet(r + 1), fact, jet(r)));
            line(format!("iod = exp((1/{})*{})", fact, jet(r)));
            line("liedet = const".into());
        }
        "54" => {
            if r < 1 {
                return Err(Error::Constraint("entry 54 needs r >= 1".into()));
            }
            line("series r min 1 default 1 max 6".to_string());
            line("labels N1=\"26\" N0=\"72,(4)\"".into());
            line("e1 = D[x]".into());
            line("e2 = x*D[x]".into());
            line("e3 = y*D[y]".into());
            line("e4 = D[y]".into());
            for k in 1..=r {
                line(format!("e{} = x^{k}*D[y]", k + 4));
            }
            line(format!("invariant = {}*{}*({})^(-2)", jet(r + 1), jet(r + 3), jet(r + 2)));
            line(format!("iod = {}*({})^(-1)", jet(r + 1), jet(r + 2)));
            line(format!("liedet = {}*{}", jet(r + 1), jet(r + 2)));
        }
        "55" => {
            if r < 1 {
                return Err(Error::Constraint("entry 55 needs r >= 1".into()));
            }
            line("series r min 1 default 1 max 6".to_string());
            line("labels N1=\"27\" N0=\"71,(4);72,(1)\"".into());
            line("e1 = D[x]".into());
            line("e2 = D[y]".into());
            line(format!("e3 = 2*x*D[x] + {r}*y*D[y]"));
            line(format!("e4 = x^2*D[x] + {r}*x*y*D[y]"));
            for k in 1..=r {
                line(format!("e{} = x^{k}*D[y]", k + 4));
            }
            line(format!(
                "invariant = Q({})*({})^(-({})/({}))",
                r + 3,
                jet(r + 1),
                2 * r + 8,
                r + 2
            ));
            line(format!("iod = ({})^(-2/({}))", jet(r + 1), r + 2));
            line(format!("liedet = ({})^2", jet(r + 1)));
        }
        "56" => {
            line("series r min 0 default 0 max 6".to_string());
            line("labels N1=\"15;28\" N0=\"73,(5);72,(2)\"".into());
            line("e1 = D[x]".into());
            line("e2 = x*D[x]".into());
            line("e3 = y*D[y]".into());
            if r == 0 {
                line("e4 = x^2*D[x]".into());
            } else {
                line(format!("e4 = x^2*D[x] + {r}*x*y*D[y]"));
            }
            line("e5 = D[y]".into());
            for k in 1..=r {
                line(format!("e{} = x^{k}*D[y]", k + 5));
            }
            line(format!("invariant = S({})*Q({})^(-3/2)", r + 4, r + 3));
            line(format!("iod = {}*Q({})^(-1/2)", jet(r + 1), r + 3));
            line(format!("liedet = {}*Q({})", jet(r + 1), r + 3));
        }
        other => {
            return Err(Error::UnknownEntry(format!("{other} is not a series row")));
        }
    }
    Ok(out)
}

fn eta_default(i: usize) -> String {
    let rate = ETA_RATES[i - 1];
    match rate {
        1 => "exp(x)".into(),
        -1 => "exp(-x)".into(),
        k if k > 0 => format!("exp({k}*x)"),
        k => format!("exp(-{}*x)", -k),
    }
}

/// Builds the spec for a series row at an explicit index.
pub fn build_series(label: &str, r: u32) -> Result<EntrySpec> {
    let text = series_text(label, r)?;
    let lines: Vec<(usize, usize, String)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (0usize, i + 1, l.to_string()))
        .collect();
    parse_entry_body(label, &lines)
}

pub fn is_series_row(label: &str) -> bool {
    matches!(label, "48" | "49" | "50" | "51" | "52" | "53" | "54" | "55" | "56")
}
