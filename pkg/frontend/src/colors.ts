/** Stable, visually spread community colors (golden-angle hues). */

export function communityColor(community: number): string {
  const hue = ((community * 137.50776405003785) % 360).toFixed(3);
  return `hsl(${hue}, 62%, 46%)`;
}
