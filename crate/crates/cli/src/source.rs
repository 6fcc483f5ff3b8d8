//! Word sources: a continued-fraction slope or a built-in control word.

use clap::Args;

use sturmian::confrac::CFExpansion;
use sturmian::error::{Error, Result};
use sturmian::word::FiniteWord;
use sturmian::wordgen::LanguageView;

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Continued-fraction slope, e.g. "[0;1,2,(3,1)]"
    #[arg(long, conflicts_with = "control")]
    pub slope: Option<String>,

    /// Built-in control word: thue-morse, fibonacci-substitution, or periodic:WORD
    #[arg(long)]
    pub control: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Source {
    Slope(CFExpansion),
    ThueMorse,
    FibonacciSubstitution,
    Periodic(FiniteWord),
}

impl Source {
    pub fn parse(args: &SourceArgs) -> Result<Source> {
        match (&args.slope, &args.control) {
            (Some(s), None) => Ok(Source::Slope(s.parse()?)),
            (None, Some(c)) => match c.as_str() {
                "thue-morse" => Ok(Source::ThueMorse),
                "fibonacci-substitution" => Ok(Source::FibonacciSubstitution),
                other => match other.strip_prefix("periodic:") {
                    Some(pattern) => Ok(Source::Periodic(pattern.parse()?)),
                    None => Err(Error::InvalidParameter(format!(
                        "unknown control {other:?}; expected thue-morse, fibonacci-substitution, or periodic:WORD"
                    ))),
                },
            },
            _ => Err(Error::InvalidParameter("exactly one of --slope/--control is required".into())),
        }
    }

    pub fn slope(&self) -> Option<&CFExpansion> {
        match self {
            Source::Slope(cf) => Some(cf),
            _ => None,
        }
    }

    /// View sized so that factor, return-word, and index queries up to
    /// n_max are certified. Control words have no closed form to size
    /// against, so they get a generous stabilization-certified depth.
    pub fn view(&self, n_max: usize) -> Result<LanguageView> {
        let control_depth = 12 * n_max + 40;
        match self {
            Source::Slope(cf) => LanguageView::sturmian(cf, n_max + 1),
            Source::ThueMorse => LanguageView::thue_morse(control_depth),
            Source::FibonacciSubstitution => LanguageView::fibonacci_substitution(control_depth),
            Source::Periodic(p) => LanguageView::periodic(p, control_depth + 2 * p.len()),
        }
    }

    /// Thue-Morse conventionally renders over {0,1}; everything else
    /// over {A,B}.
    pub fn render(&self, w: &FiniteWord) -> String {
        match self {
            Source::ThueMorse => w.to_binary_string(),
            _ => w.to_ab_string(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Source::Slope(cf) => format!("slope={cf}"),
            Source::ThueMorse => "control=thue-morse".into(),
            Source::FibonacciSubstitution => "control=fibonacci-substitution".into(),
            Source::Periodic(p) => format!("control=periodic:{p}"),
        }
    }
}
