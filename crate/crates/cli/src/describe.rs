//! Parameter schemas printed by `shadowlab describe <kind>`.

use crate::CliError;

const TORAL: &str = "\
kind = \"toral\"
  x -> M x mod 1 on the n-torus.

  matrix   integer n x n rows, |det| = 1     default [[2, 1], [1, 1]]
           The automorphism. Hyperbolic when no eigenvalue has modulus 1;
           its periodic points are enumerated exactly by `enumerate`, and
           the 2x2 case supplies the homoclinic point used by `splice`.
";

const PERTURBED_TORAL: &str = "\
kind = \"perturbed-toral\"
  x -> M s(x) mod 1, where the shear s moves each coordinate by
  amplitude / (2 pi) * sin(2 pi x_(j+1)).

  matrix        integer n x n rows, n >= 2        default [[2, 1], [1, 1]]
                Base automorphism.
  amplitude     real                              default 0.1
                Size of the shear. Small amplitudes keep a hyperbolic base
                hyperbolic and keep the origin fixed.
  norm_samples  positive integer                  default 10000
                Halton samples used to bound sup |Df|.
";

const JORDAN: &str = "\
kind = \"jordan\"
  v -> A v + phi(v) near a non-hyperbolic fixed point at the origin, where
  A = diag(J, P) and phi vanishes on the ball |v| <= a_ball.

  block         \"real\" | \"rotation\"              default \"real\"
                Real Jordan block with eigenvalue +-1, or the real block of
                a rotation pair exp(+-i theta).
  l             positive integer                  default 2
                Jordan chain length. The staircase witness period grows
                like K^l.
  eigenvalue    1 | -1                            default 1
                Diagonal of a real block.
  theta         real (radians)                    default 0.5
                Rotation angle of a rotation block.
  tail          list of reals, none 0 or +-1      default [2.0]
                Diagonal of the hyperbolic part P.
  c             real >= 0                         default 1.0
                Scale of the cubic term, |phi(v)| <= c |v|^3. With c = 0 the
                model is linear and the staircase lower bound K d is proven.
  a_ball        real > 0                          default 0.5
                Radius of the ball on which the model is exactly linear.
  half_width    real > 0                          default 10.0
                Half width of the box phase space.
  norm_samples  positive integer                  default 10000
                Halton samples used to bound sup |Df|.
";

const LINEAR: &str = "\
kind = \"linear\"
  x -> A x on a box.

  matrix      real n x n rows                     required
              The map. Hyperbolic A gives the closed-form linear shadow and
              the resolvent bound on Lipschitz constants.
  half_width  real > 0                            default 10.0
              Half width of the box phase space.
";

pub const KINDS: &[&str] = &["toral", "perturbed-toral", "jordan", "linear"];

pub fn describe(kind: &str) -> Result<&'static str, CliError> {
    match kind {
        "toral" => Ok(TORAL),
        "perturbed-toral" => Ok(PERTURBED_TORAL),
        "jordan" => Ok(JORDAN),
        "linear" => Ok(LINEAR),
        other => Err(CliError::UnknownKind(other.to_string())),
    }
}
