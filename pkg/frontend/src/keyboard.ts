// Keyboard layout for manual control; identical to the terminal tool's
// bindings (the server's welcome legend lists the same keys).

const ARROW_KEYS: Record<string, string> = {
  ArrowUp: "Up",
  ArrowLeft: "Left",
  ArrowRight: "Right",
};

export const KEY_TO_ACTION: Record<string, number> = {
  Up: 0, w: 0,          // forward
  Left: 1, a: 1,        // turn_left
  Right: 2, d: 2,       // turn_right
  "1": 10, "2": 11, "3": 12,  // pickup bottom/middle/top
  "4": 5, "5": 6, "6": 7,     // drop bottom/middle/top
  "7": 8,               // drop_in
  o: 9,                 // open
  c: 3,                 // close
  t: 14,                // toggle
  s: 13,                // slice
  k: 4,                 // cook
};

// DOM KeyboardEvent.key -> logical key name used in the bindings table.
export function normalizeKey(domKey: string): string {
  return ARROW_KEYS[domKey] ?? domKey;
}

export function actionForKey(domKey: string): number | null {
  const action = KEY_TO_ACTION[normalizeKey(domKey)];
  return action === undefined ? null : action;
}
