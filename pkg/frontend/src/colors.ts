/** Deterministic label colors: same label, same color, every session. */

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function labelHue(label: string): number {
  return fnv1a(label) % 360;
}

export function spanColor(label: string): string {
  return `hsl(${labelHue(label)}, 70%, 82%)`;
}

export function lineColor(label: string, shade: "primary" | "secondary" = "primary"): string {
  const lightness = shade === "primary" ? 38 : 58;
  return `hsl(${labelHue(label)}, 65%, ${lightness}%)`;
}
