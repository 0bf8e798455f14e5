//! The witness data of the non-BV-exact elliptic model.

pub const OMEGA: &str = "x1^14*y2*y3 - x1^13*x2*y1*y3 + x1^12*x2^2*y1*y2";

pub const ALPHA: &str = "-1380 x1^11*x2^6*y3' - 5290 x1^11*x2^5*y3*x2' - 114 x1^10*y1*y2*y2' \
+ 114 x1^10*y1*y3*y1' - 114 x1^9*x2*y1*y2*y1' + 93/2 x1^2*y2*y3*z' + x1^2*y2*z*y3' \
- x1^2*y3*z*y2' + 114 x1*x2^7*y2*y3*y3' - 93/2 x1*x2*y1*y3*z' - x1*x2*y1*z*y3' \
- 114 x1*x2*y2*z*y2' + 115 x1*x2*y3*z*y1' + 113 x1*y1*y3*z*x2' + 572 x1*y2*y3*z*x1' \
+ 115 x2^9*z' - 114 x2^8*y1*y3*y3' + 114 x2^8*y2*y3*y2' + 1150 x2^8*z*x2' \
+ 93/2 x2^2*y1*y2*z' + 115 x2^2*y1*z*y2' - 115 x2^2*y2*z*y1' - 340 x2*y1*y2*z*x2' \
- 229 x2*y1*y3*z*x1'";
