// Latest-wins guard: one in-flight request at a time wins; responses to
// superseded requests are dropped by sequence number.

export class SequenceGuard {
  private counter = 0;

  next(): number {
    this.counter += 1;
    return this.counter;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.counter;
  }
}
