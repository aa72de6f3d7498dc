// Small shipped SVG icon set keyed by category, with a generated fallback
// glyph for anything unknown. Furniture background colors are derived
// deterministically from the category name.

const VB = `xmlns="http://www.w3.org/2000/svg" viewBox="0 0 24 24"`;

export const ICON_SVG: Record<string, string> = {
  printer: `<svg ${VB}><rect x="4" y="9" width="16" height="8" rx="1" fill="#444"/><rect x="7" y="4" width="10" height="5" fill="#777"/><rect x="7" y="15" width="10" height="5" fill="#eee" stroke="#444"/><circle cx="18" cy="11" r="1" fill="#6f6"/></svg>`,
  book: `<svg ${VB}><path d="M5 4h11a3 3 0 0 1 3 3v13H8a3 3 0 0 1-3-3z" fill="#3b6fb5"/><path d="M5 4v13a3 3 0 0 0 3 3h11" fill="none" stroke="#223" stroke-width="1.5"/></svg>`,
  hardback: `<svg ${VB}><path d="M5 4h11a3 3 0 0 1 3 3v13H8a3 3 0 0 1-3-3z" fill="#8a4fb0"/><rect x="7" y="7" width="8" height="2" fill="#fff"/></svg>`,
  rag: `<svg ${VB}><path d="M4 8l8-4 8 4-4 12H8z" fill="#e8d44d"/><path d="M8 20l4-12 4 12" stroke="#b9a62e" fill="none"/></svg>`,
  towel: `<svg ${VB}><rect x="6" y="4" width="12" height="16" rx="2" fill="#9fd7e8"/><line x1="6" y1="9" x2="18" y2="9" stroke="#5aa7bd"/></svg>`,
  scrub_brush: `<svg ${VB}><rect x="5" y="12" width="14" height="5" rx="2" fill="#a0622d"/><path d="M6 17v3M9 17v3M12 17v3M15 17v3M18 17v3" stroke="#555"/></svg>`,
  soap: `<svg ${VB}><rect x="5" y="9" width="14" height="8" rx="4" fill="#f498c0"/><circle cx="16" cy="7" r="2" fill="#cde" opacity="0.8"/></svg>`,
  broom: `<svg ${VB}><line x1="14" y1="3" x2="10" y2="14" stroke="#8a5a2b" stroke-width="2"/><path d="M7 14h7l2 7H5z" fill="#d8b24a"/></svg>`,
  car: `<svg ${VB}><path d="M4 14l2-5h12l2 5v4H4z" fill="#c0392b"/><circle cx="8" cy="18" r="2" fill="#222"/><circle cx="16" cy="18" r="2" fill="#222"/></svg>`,
  plate: `<svg ${VB}><circle cx="12" cy="12" r="8" fill="#f2f2f2" stroke="#aaa"/><circle cx="12" cy="12" r="4" fill="#e0e0e0"/></svg>`,
  pan: `<svg ${VB}><circle cx="10" cy="13" r="6" fill="#555"/><rect x="15" y="12" width="7" height="2" fill="#333"/></svg>`,
  teapot: `<svg ${VB}><ellipse cx="11" cy="14" rx="6" ry="5" fill="#4d7ea8"/><path d="M17 12l4-2v4z" fill="#4d7ea8"/><rect x="9" y="7" width="4" height="2" fill="#4d7ea8"/></svg>`,
  kettle: `<svg ${VB}><ellipse cx="12" cy="14" rx="6" ry="5" fill="#888"/><path d="M6 10l-2-3h4z" fill="#888"/></svg>`,
  teabag: `<svg ${VB}><rect x="8" y="9" width="8" height="10" rx="1" fill="#d9c7a7"/><line x1="12" y1="9" x2="12" y2="4" stroke="#777"/></svg>`,
  lemon: `<svg ${VB}><ellipse cx="12" cy="13" rx="7" ry="5" fill="#f2d024"/></svg>`,
  apple: `<svg ${VB}><circle cx="12" cy="14" r="6" fill="#d33"/><line x1="12" y1="8" x2="13" y2="5" stroke="#583"/></svg>`,
  tomato: `<svg ${VB}><circle cx="12" cy="14" r="6" fill="#e74c3c"/><path d="M12 8l-2-2M12 8l2-2" stroke="#27ae60"/></svg>`,
  lettuce: `<svg ${VB}><circle cx="12" cy="13" r="7" fill="#7dcd5e"/><path d="M6 13q3-4 6 0t6 0" stroke="#4f9e38" fill="none"/></svg>`,
  radish: `<svg ${VB}><circle cx="12" cy="15" r="5" fill="#c2477f"/><path d="M12 10V5" stroke="#4f9e38"/></svg>`,
  knife: `<svg ${VB}><path d="M4 16L16 4l2 2-10 12z" fill="#bbb"/><rect x="15" y="15" width="6" height="3" rx="1" transform="rotate(45 18 16)" fill="#6b4226"/></svg>`,
  carving_knife: `<svg ${VB}><path d="M3 17L17 3l3 3-12 13z" fill="#ccc"/><rect x="15" y="16" width="7" height="3" rx="1" transform="rotate(45 18 17)" fill="#40291a"/></svg>`,
  plywood: `<svg ${VB}><rect x="4" y="8" width="16" height="8" fill="#deb887" stroke="#a9824f"/><line x1="4" y1="12" x2="20" y2="12" stroke="#a9824f"/></svg>`,
  saw: `<svg ${VB}><path d="M3 14h12l-1 2-2 0-1 2-2 0-1 2-2 0-1 2H3z" fill="#999"/><rect x="15" y="12" width="6" height="4" rx="2" fill="#6b4226"/></svg>`,
  hammer: `<svg ${VB}><rect x="6" y="5" width="10" height="4" rx="1" fill="#666"/><rect x="10" y="9" width="3" height="11" fill="#a9824f"/></svg>`,
  hamburger: `<svg ${VB}><path d="M5 10a7 5 0 0 1 14 0z" fill="#e0a353"/><rect x="5" y="10" width="14" height="3" fill="#7daa4d"/><rect x="5" y="13" width="14" height="3" fill="#8a5a2b"/><path d="M5 16h14a7 4 0 0 1-14 0z" fill="#e0a353"/></svg>`,
  candle: `<svg ${VB}><rect x="10" y="9" width="4" height="11" fill="#f5e6c8"/><path d="M12 5q2 2 0 4q-2-2 0-4" fill="#f5a623"/></svg>`,
  pot_plant: `<svg ${VB}><path d="M8 14h8l-1 6H9z" fill="#b06030"/><path d="M12 14q-6-2-5-8q6 1 5 8q1-7 5-8q1 6-5 8" fill="#4f9e38"/></svg>`,
  package: `<svg ${VB}><rect x="5" y="8" width="14" height="11" fill="#c49a6c"/><line x1="12" y1="8" x2="12" y2="19" stroke="#8a6a44"/><line x1="5" y1="11" x2="19" y2="11" stroke="#8a6a44"/></svg>`,
  carton: `<svg ${VB}><rect x="5" y="7" width="14" height="12" fill="#b59367" stroke="#8a6a44"/><path d="M5 7l7 3 7-3" fill="none" stroke="#8a6a44"/></svg>`,
  blender: `<svg ${VB}><path d="M8 4h8l-1.5 9h-5z" fill="#9fc7e8" stroke="#567"/><rect x="8" y="13" width="8" height="6" rx="1" fill="#555"/></svg>`,
};

const FURNITURE_ICON: Record<string, string> = {
  table: `<svg ${VB}><rect x="3" y="8" width="18" height="4" fill="#8a5a2b"/><rect x="5" y="12" width="2" height="8" fill="#6b4226"/><rect x="17" y="12" width="2" height="8" fill="#6b4226"/></svg>`,
  cabinet: `<svg ${VB}><rect x="4" y="4" width="16" height="16" fill="#a9824f"/><line x1="12" y1="4" x2="12" y2="20" stroke="#6b4226"/><circle cx="10" cy="12" r="1" fill="#333"/><circle cx="14" cy="12" r="1" fill="#333"/></svg>`,
  sink: `<svg ${VB}><rect x="4" y="10" width="16" height="8" rx="3" fill="#ccd7dd"/><path d="M8 10V7h6" fill="none" stroke="#778"/></svg>`,
  stove: `<svg ${VB}><rect x="4" y="6" width="16" height="12" fill="#444"/><circle cx="9" cy="10" r="2.2" fill="none" stroke="#c33"/><circle cx="15" cy="14" r="2.2" fill="none" stroke="#c33"/></svg>`,
  refrigerator: `<svg ${VB}><rect x="6" y="3" width="12" height="18" rx="1" fill="#dbe4ea"/><line x1="6" y1="10" x2="18" y2="10" stroke="#9ab"/></svg>`,
  shelf: `<svg ${VB}><rect x="4" y="4" width="16" height="16" fill="none" stroke="#8a5a2b" stroke-width="2"/><line x1="4" y1="10" x2="20" y2="10" stroke="#8a5a2b" stroke-width="2"/><line x1="4" y1="15" x2="20" y2="15" stroke="#8a5a2b" stroke-width="2"/></svg>`,
  bed: `<svg ${VB}><rect x="3" y="10" width="18" height="7" rx="2" fill="#7f9ccb"/><rect x="4" y="8" width="6" height="4" rx="2" fill="#eee"/></svg>`,
  countertop: `<svg ${VB}><rect x="3" y="8" width="18" height="5" fill="#b9c2c8"/><rect x="4" y="13" width="16" height="7" fill="#8a97a0"/></svg>`,
  trash_can: `<svg ${VB}><path d="M7 8h10l-1 12H8z" fill="#667"/><rect x="6" y="5" width="12" height="3" fill="#556"/></svg>`,
  bucket: `<svg ${VB}><path d="M6 9h12l-2 11H8z" fill="#5a8aa8"/><path d="M6 9a6 3 0 0 1 12 0" fill="none" stroke="#447"/></svg>`,
  box: `<svg ${VB}><rect x="4" y="9" width="16" height="11" fill="#c49a6c" stroke="#8a6a44"/><path d="M4 9l3-4h10l3 4" fill="#b08a5d" stroke="#8a6a44"/></svg>`,
  chair: `<svg ${VB}><rect x="7" y="4" width="3" height="12" fill="#6b4226"/><rect x="7" y="12" width="10" height="3" fill="#8a5a2b"/><rect x="15" y="15" width="2" height="5" fill="#6b4226"/></svg>`,
};

export function iconFor(category: string): string {
  const icon = ICON_SVG[category] ?? FURNITURE_ICON[category];
  if (icon) return icon;
  const letter = (category[0] ?? "?").toUpperCase();
  return `<svg ${VB}><rect x="4" y="4" width="16" height="16" rx="3" fill="#ddd" stroke="#999"/><text x="12" y="16" font-size="11" text-anchor="middle" fill="#333">${letter}</text></svg>`;
}

function fnv1a32(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

// Deterministic pastel background per furniture category.
export function furnitureColor(category: string): string {
  const hue = fnv1a32(category) % 360;
  return `hsl(${hue}, 45%, 78%)`;
}
