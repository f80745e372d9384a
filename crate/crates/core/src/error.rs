use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("series is not invertible: {0}")]
    NotInvertible(&'static str),

    #[error("no maps with {n} faces at distance {s}")]
    EmptyEnsemble { n: usize, s: usize },

    #[error("hypergeometric series does not converge for |sigma| = {0}")]
    Divergent(f64),

    #[error("hypergeometric series hits a pole at n = {0}")]
    Pole(usize),

    #[error("denominator W vanishes (|W| = {0:e})")]
    DegenerateW(f64),

    #[error("quadrature did not converge: estimate {value:e} with error {error:e}")]
    Quadrature { value: f64, error: f64 },

    #[error("imaginary part {residue:e} of a real profile exceeds {tol:e}")]
    ImaginaryResidue { residue: f64, tol: f64 },

    #[error("denominator {0:e} too close to zero")]
    NearZeroDenominator(f64),

    #[error("inversion methods disagree at l = {ell}: talbot {talbot:e}, gaver {gaver:e}")]
    InversionMismatch { ell: f64, talbot: f64, gaver: f64 },

    #[error("transform falls by {ratio:e} from omega = {omega} to 2 omega; not the transform of a density with power-law behavior at zero")]
    TransformDecay { omega: f64, ratio: f64 },

    #[error("density {value:e} at l = {ell} is negative beyond rounding noise")]
    NegativeDensity { ell: f64, value: f64 },

    #[error("coefficient of S^{power} should vanish, got {value:e}")]
    SpuriousTerm { power: i32, value: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("malformed grid '{0}'")]
    Grid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
