import { describe, expect, it } from 'vitest';

import { CommandClient, ConnectionClosed, type LineTransport } from '../src/client.js';

class FakeTransport implements LineTransport {
  sent: string[] = [];
  private lineHandler: (line: string) => void = () => {};
  private closeHandler: () => void = () => {};

  send(line: string): void {
    this.sent.push(line);
  }
  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }
  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }
  close(): void {
    this.closeHandler();
  }
  replyWith(line: string): void {
    this.lineHandler(line);
  }
}

describe('CommandClient', () => {
  it('keeps exactly one command on the wire', async () => {
    const transport = new FakeTransport();
    const client = new CommandClient(transport);
    const first = client.send({ cmd: 'step' });
    const second = client.send({ cmd: 'continue' });
    expect(transport.sent).toEqual(['{"cmd":"step"}']);

    transport.replyWith('{"event": "paused", "line": 2}');
    await expect(first).resolves.toEqual({
      command: { cmd: 'step' },
      event: { event: 'paused', line: 2 },
    });
    expect(transport.sent).toEqual(['{"cmd":"step"}', '{"cmd":"continue"}']);

    transport.replyWith('{"event": "stageEnd", "stage": 1}');
    await expect(second).resolves.toMatchObject({ event: { event: 'stageEnd', stage: 1 } });
  });

  it('rejects a command whose reply cannot be decoded, then recovers', async () => {
    const transport = new FakeTransport();
    const client = new CommandClient(transport);
    const bad = client.send({ cmd: 'step' });
    const good = client.send({ cmd: 'continue' });

    transport.replyWith('garbage');
    await expect(bad).rejects.toThrow('not JSON');

    transport.replyWith('{"event": "paused", "line": 5}');
    await expect(good).resolves.toMatchObject({ event: { event: 'paused', line: 5 } });
  });

  it('rejects everything pending when the transport closes', async () => {
    const transport = new FakeTransport();
    const client = new CommandClient(transport);
    let closed = false;
    client.onClosed(() => {
      closed = true;
    });
    const inflight = client.send({ cmd: 'step' });
    const queued = client.send({ cmd: 'continue' });

    transport.close();
    await expect(inflight).rejects.toBeInstanceOf(ConnectionClosed);
    await expect(queued).rejects.toBeInstanceOf(ConnectionClosed);
    expect(closed).toBe(true);
    await expect(client.send({ cmd: 'step' })).rejects.toBeInstanceOf(ConnectionClosed);
  });

  it('survives unsolicited lines', () => {
    const transport = new FakeTransport();
    new CommandClient(transport);
    expect(() => transport.replyWith('{"event": "paused", "line": 1}')).not.toThrow();
  });
});
