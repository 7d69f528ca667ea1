export function formatScore(value: number): string {
  return value.toFixed(1);
}

export function formatDelta(value: number): string {
  const text = value.toFixed(1);
  return value >= 0 ? `+${text}` : text;
}

export function shortId(id: string): string {
  return id.slice(0, 8);
}

export function verdictClass(verdict: string): string {
  return `verdict verdict--${verdict.toLowerCase()}`;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}
