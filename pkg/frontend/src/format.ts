/** The single number formatter.
 *
 * Every number the UI shows must be a service-response value rendered through
 * this function; the provenance test rebuilds the allowed set with it, so a
 * component doing its own arithmetic or formatting fails that test.
 */
export function fmt(value: number): string {
  if (Number.isInteger(value)) return String(value);
  const s = value.toPrecision(6);
  if (s.includes("e")) return s;
  return s.replace(/0+$/, "").replace(/\.$/, "");
}

/** Interval rendering, e.g. [8, 15]. */
export function fmtInterval(lo: number, hi: number): string {
  return `[${fmt(lo)}, ${fmt(hi)}]`;
}
