/** Trailing-edge debounce; the last call within the window wins. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs = 100,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, waitMs);
  };
}
